import numpy as np
import pytest

from dmu import CPoly, MeasureSpec, make_measure
from dmu.measures import DiskDensity
from dmu.multiplier import (carleson_constant, multiplier_certificate,
                            multiplier_norm_lb, pick_positivity, shift_norm,
                            sup_circle_abs)
from dmu.poly import poly_eval
from tests.conftest import random_poly

Z = CPoly([0.0, 1.0])


def test_carleson_zero_measure(presets):
    nu = MeasureSpec(label="zero")
    assert carleson_constant(nu, presets["dirichlet"], 6).constant == pytest.approx(0.0)


def test_carleson_point_mass_at_zero(presets):
    nu = MeasureSpec(label="delta0", atoms=((0.0 + 0j, 1.0),))
    for N in (0, 3, 8):
        rep = carleson_constant(nu, presets["dirichlet"], N)
        assert rep.constant == pytest.approx(1.0, rel=1e-12)


def test_carleson_hardy_weight_bounded(presets):
    nu = MeasureSpec(label="hardyw", disk=DiskDensity(kind="hardy"))
    prev = 0.0
    for N in (2, 6, 12, 20):
        rep = carleson_constant(nu, presets["dirichlet"], N)
        assert rep.constant <= 1.0 + 1e-12
        assert rep.constant >= prev - 1e-10
        prev = rep.constant


def test_carleson_eigen_oracle(presets):
    # brute-force oracle: dense eigendecomposition of inv(G) A
    nu = MeasureSpec(label="mix", atoms=((0.3 + 0.2j, 0.8), (0.0, 0.2)))
    N = 7
    rep = carleson_constant(nu, presets["hardy"], N)
    from dmu.spaces import gram_matrix
    from dmu.multiplier import _monomial_measure_matrix

    G = gram_matrix("dmu", presets["hardy"], N).matrix
    A = _monomial_measure_matrix(nu, N)
    eigs = np.linalg.eigvals(np.linalg.solve(G, A))
    assert rep.constant == pytest.approx(float(np.max(eigs.real)), rel=1e-10)


def test_carleson_rejects_circle_part(presets):
    with pytest.raises(ValueError):
        carleson_constant(presets["dirichlet"], presets["hardy"], 4)


def test_multiplier_norm_constant(presets):
    c = CPoly([2.0 - 1.5j])
    for N in (0, 4):
        assert multiplier_norm_lb(c, presets["hardy"], N) == pytest.approx(abs(2.0 - 1.5j))


def test_multiplier_norm_z_dirichlet(presets):
    assert multiplier_norm_lb(Z, presets["dirichlet"], 0) == pytest.approx(np.sqrt(2.0))
    lb = multiplier_norm_lb(Z, presets["dirichlet"], 20)
    assert 1.0 <= lb <= np.sqrt(2.0) + 1e-12


def test_multiplier_norm_monotone(presets, rng):
    phi = random_poly(rng, 3)
    prev = 0.0
    for N in (2, 4, 6, 8):
        val = multiplier_norm_lb(phi, presets["atom1"], N)
        assert val >= prev - 1e-10
        prev = val


def test_multiplier_norm_dominates_point_values(presets, rng):
    # kernel eigenvector argument: the multiplier norm dominates |phi|
    # at interior points
    phi = 0.5 * random_poly(rng, 2)
    grid = 0.7 * np.sqrt(rng.random(20)) * np.exp(2j * np.pi * rng.random(20))
    for name in ("dirichlet", "hardy"):
        lb = multiplier_norm_lb(phi, presets[name], 24)
        assert lb >= np.max(np.abs(poly_eval(phi, grid))) - 1e-2


def test_sup_circle_exact():
    assert sup_circle_abs(CPoly([3.0])) == pytest.approx(3.0)
    assert sup_circle_abs(Z) == pytest.approx(1.0)
    assert sup_circle_abs(CPoly([0.5, 0.5])) == pytest.approx(1.0)
    # |1 + 0.3 z + 0.2 z^2| attains its circle max off the obvious angles
    phi = CPoly([1.0, 0.3, 0.2])
    grid = np.exp(2j * np.pi * np.linspace(0, 1, 20001))
    want = float(np.max(np.abs(poly_eval(phi, grid))))
    assert sup_circle_abs(phi) == pytest.approx(want, rel=1e-8)


def test_certificate_examples(presets):
    cert = multiplier_certificate(CPoly([2.0]), presets["dirichlet"], N=8)
    assert cert.sup_circle == pytest.approx(2.0)
    assert cert.carleson.constant == pytest.approx(0.0, abs=1e-12)

    cert = multiplier_certificate(Z, presets["dirichlet"], N=20)
    assert cert.sup_circle == pytest.approx(1.0)
    assert cert.carleson.constant <= 1.0 + 1e-6

    cert = multiplier_certificate(CPoly([0.5, 0.5]), presets["atom1"], N=12)
    assert cert.sup_circle == pytest.approx(1.0)
    assert np.isfinite(cert.carleson.constant)


def test_shift_norm_h2(presets):
    for N in (0, 5, 10):
        assert shift_norm("h2", presets["dirichlet"], N) == pytest.approx(1.0)


def test_shift_norm_emu_contraction(presets):
    for mu in presets.values():
        for N in (0, 7, 20):
            assert shift_norm("emu", mu, N) <= 1.0 + 1e-8


def test_shift_norm_dmu_expansive(presets):
    assert shift_norm("dmu", presets["dirichlet"], 0) == pytest.approx(np.sqrt(2.0))


def test_pick_h2(presets, rng):
    pts = 0.6 * np.sqrt(rng.random(5)) * np.exp(2j * np.pi * rng.random(5))
    assert pick_positivity("h2", presets["dirichlet"], 20, Z, pts) >= -1e-8


def test_pick_zero_multiplier(presets, rng):
    pts = 0.6 * np.sqrt(rng.random(5)) * np.exp(2j * np.pi * rng.random(5))
    val = pick_positivity("emu", presets["dirichlet"], 15, CPoly([]), pts)
    assert val > 0  # plain kernel Gram is positive definite


def test_pick_emu_contractive(presets, rng):
    pts = 0.6 * np.sqrt(rng.random(6)) * np.exp(2j * np.pi * rng.random(6))
    for name in ("dirichlet", "hardy"):
        for phi in (Z, CPoly([0, 0, 1.0]), CPoly([0, 0.5, 0.5])):
            val = pick_positivity("emu", presets[name], 20, phi, pts)
            assert val >= -1e-6
