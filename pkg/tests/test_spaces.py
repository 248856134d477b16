import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dmu import (CPoly, MeasureSpec, backward_shift, gram_matrix, green_check,
                 hd_norm_sq, kernel_eval, make_measure, poly_eval)
from dmu.poly import TrigPoly, h2_norm_sq
from dmu.spaces import (KernelApprox, cauchy_dual_transform, dmu_norm_sq,
                        dmu_seminorm_sq, dual_transform_taylor,
                        duality_pairing_check, emu_norm_sq, local_dirichlet,
                        local_dirichlet_field)
from tests.conftest import random_poly


# --- local Dirichlet ----------------------------------------------------------

def test_local_dirichlet_monomials():
    for k in range(1, 8):
        f = CPoly.monomial(k)
        assert local_dirichlet(f, 0.0) == pytest.approx(1.0)
        lam = np.exp(0.37j * k)
        assert local_dirichlet(f, lam) == pytest.approx(k, rel=1e-13)


def test_local_dirichlet_area_matches_boundary(rng):
    for _ in range(6):
        f = random_poly(rng, int(rng.integers(1, 9)))
        lam = 0.9 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        b = local_dirichlet(f, lam, "boundary")
        a = local_dirichlet(f, lam, "area")
        assert a == pytest.approx(b, rel=1e-6)


def test_local_dirichlet_area_boundary_point():
    f = CPoly([0.0, 1.0, 0.5])
    lam = np.exp(1.1j)
    assert local_dirichlet(f, lam, "area") == pytest.approx(
        local_dirichlet(f, lam, "boundary"), rel=1e-12)


def test_local_dirichlet_rejects_outside():
    with pytest.raises(ValueError):
        local_dirichlet(CPoly([0, 1]), 1.5)


def test_local_dirichlet_field_matches_scalar(rng):
    f = random_poly(rng, 7)
    pts = 0.9 * (rng.random(8) + 1j * rng.random(8)) / np.sqrt(2)
    vals = local_dirichlet_field(f, pts)
    for z, v in zip(pts, vals):
        assert v == pytest.approx(local_dirichlet(f, z), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False,
                                   allow_infinity=False), min_size=1, max_size=8),
       st.floats(0, 1), st.floats(0, 2 * np.pi))
def test_shift_identity(coeffs, rad, ang):
    g = CPoly(coeffs)
    lam = np.sqrt(rad) * np.exp(1j * ang)
    lg = backward_shift(g)
    lhs = local_dirichlet(g, lam)
    rhs = abs(poly_eval(lg, lam)) ** 2 + local_dirichlet(lg, lam)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


# --- norms ---------------------------------------------------------------------

def test_monomial_norms_dirichlet(presets):
    for k in range(0, 9):
        f = CPoly.monomial(k)
        for mode in ("u", "v", "measure"):
            assert dmu_norm_sq(f, presets["dirichlet"], mode) == pytest.approx(
                1.0 + k, rel=1e-12)


def test_atom_measure_mode(presets):
    for k in range(1, 6):
        f = CPoly.monomial(k)
        got = dmu_norm_sq(f, presets["atom1"], "measure")
        assert got == pytest.approx(1.0 + k, rel=1e-13)


def test_constant_norm_every_mode(presets):
    c = CPoly([2.0 - 1.0j])
    for mu in presets.values():
        for mode in ("u", "v", "measure"):
            assert dmu_norm_sq(c, mu, mode) == pytest.approx(5.0, rel=1e-13)


def test_norm_mode_consistency(presets, rng):
    for mu in presets.values():
        for _ in range(4):
            f = random_poly(rng, int(rng.integers(0, 11)))
            u = dmu_norm_sq(f, mu, "u")
            m = dmu_norm_sq(f, mu, "measure")
            assert m == pytest.approx(u, rel=1e-6)


def test_norm_equivalence_ratio(presets, rng):
    # the two weight modes are equivalent, not equal; ratios stay bounded
    for name, mu in presets.items():
        ratios = []
        for _ in range(6):
            f = random_poly(rng, int(rng.integers(1, 9)))
            u = dmu_seminorm_sq(f, mu, "u")
            v = dmu_seminorm_sq(f, mu, "v")
            ratios.append(u / v)
        assert min(ratios) >= 1.0 - 1e-8  # the log kernel dominates pointwise
        assert max(ratios) < 10.0


def test_norm_monotone_in_measure(presets, rng):
    from dmu.measures import merge_measures

    extra = make_measure("atoms", atoms=[(0.3 + 0.4j, 0.5)])
    for name in ("dirichlet", "hardy"):
        mu = presets[name]
        merged = merge_measures("sum", mu, extra)
        for _ in range(3):
            f = random_poly(rng, 6)
            assert dmu_norm_sq(f, merged, "v") >= dmu_norm_sq(f, mu, "v") - 1e-12


def test_emu_examples(presets):
    assert emu_norm_sq(CPoly([3.0]), presets["dirichlet"]) == pytest.approx(9.0)
    assert emu_norm_sq(CPoly([0, 1.0]), presets["dirichlet"]) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        emu_norm_sq(CPoly([1.0]), MeasureSpec(label="zero"))


def test_emu_h2_sandwich(presets, rng):
    # H2 embeds in E(mu) embeds in the Bergman space with weight 1-|z|^2:
    # with the envelope constants, (1-x)^2/V >= (1-x)/(4 mass) pointwise
    # gives emu >= bergman/(4 mass), and V >= (1-x) mass/4 gives
    # emu <= |f(0)|^2 + (4/mass) h2-energy <= max(1, 4/mass) h2.
    from dmu import total_mass
    from dmu.quadrature import disk_rule, integrate

    rule = disk_rule(64, 128)
    for name, mu in presets.items():
        mass = total_mass(mu)
        for _ in range(3):
            f = random_poly(rng, 6)
            fp = f.derivative()
            e = emu_norm_sq(f, mu)
            h2 = h2_norm_sq(f)
            berg = abs(poly_eval(f, 0)) ** 2 + float(np.real(integrate(
                rule, lambda w: np.abs(poly_eval(fp, w)) ** 2 * (1 - np.abs(w) ** 2))))
            assert e <= max(1.0, 4.0 / mass) * h2 * (1 + 1e-9)
            assert berg <= 4.0 * mass * e * (1 + 1e-9) + 1e-12


# --- Gram matrices and kernels --------------------------------------------------

def test_gram_h2_identity(presets):
    g = gram_matrix("h2", presets["dirichlet"], 6)
    assert np.array_equal(g.matrix, np.eye(7))


def test_gram_dirichlet_diagonal(presets):
    g = gram_matrix("dmu", presets["dirichlet"], 8)
    assert np.allclose(g.matrix, np.diag(1.0 + np.arange(9)), atol=1e-12)


def test_gram_radial_diagonal(presets):
    for name in ("hardy", "alpha"):
        g = gram_matrix("dmu", presets[name], 8)
        off = g.matrix - np.diag(np.diag(g.matrix))
        assert np.max(np.abs(off)) <= 1e-10


def test_gram_atom_hermitian_pd(presets):
    g = gram_matrix("dmu", presets["atom1"], 10)
    assert g.herm_error <= 1e-12
    assert g.min_eig > 0
    # derivative couplings make the matrix genuinely non-diagonal
    assert abs(g.matrix[1, 2]) > 0.1


def test_gram_quadrature_cross_check(presets):
    # independent route: V evaluated at nodes, plain tensor quadrature
    from dmu import eval_V
    from dmu.quadrature import disk_rule

    rule = disk_rule(160, 320)
    for name, tol in [("dirichlet", 1e-12), ("hardy", 1e-9)]:
        mu = presets[name]
        N = 5
        g = gram_matrix("dmu", mu, N).matrix
        v = eval_V(mu, rule.nodes.ravel())
        G2 = np.eye(N + 1, dtype=complex)
        z = rule.nodes.ravel()
        w = rule.weights.ravel() * v
        for j in range(1, N + 1):
            for k in range(1, N + 1):
                G2[j, k] += j * k * np.sum(w * z ** (j - 1) * np.conj(z) ** (k - 1))
        assert np.max(np.abs(g - G2)) <= tol * np.max(np.abs(g))


def test_kernel_szego_truncation(presets):
    z, w = 0.3 + 0.2j, -0.4j
    got = kernel_eval("h2", presets["dirichlet"], 7, z, w)
    want = sum((np.conj(w) * z) ** k for k in range(8))
    assert got == pytest.approx(want, rel=1e-13)


def test_kernel_hermitian_symmetry(presets, rng):
    for space in ("dmu", "emu"):
        g = gram_matrix(space, presets["atom1"], 10)
        K = KernelApprox(g)
        for _ in range(4):
            z, w = (0.8 * (rng.random(2) + 1j * rng.random(2)) / np.sqrt(2))
            assert K(z, w) == pytest.approx(np.conj(K(w, z)), rel=1e-10)


def test_kernel_matrix_psd(presets, rng):
    pts = 0.7 * np.sqrt(rng.random(5)) * np.exp(2j * np.pi * rng.random(5))
    for space in ("h2", "dmu", "emu"):
        g = gram_matrix(space, presets["hardy"], 12)
        K = KernelApprox(g).matrix(pts)
        assert np.max(np.abs(K - K.conj().T)) <= 1e-10
        assert np.min(np.linalg.eigvalsh(0.5 * (K + K.conj().T))) >= -1e-10


def test_kernel_reproduces(presets, rng):
    # <p, K_w> = p(w) for polynomials within the truncation degree
    mu = presets["atom1"]
    N = 9
    g = gram_matrix("dmu", mu, N)
    w0 = 0.4 - 0.3j
    t = np.asarray(w0) ** np.arange(N + 1)
    kw = CPoly(np.conj(np.linalg.solve(g.matrix, t)))
    for _ in range(3):
        p = random_poly(rng, N)
        assert g.inner(p, kw) == pytest.approx(poly_eval(p, w0), rel=1e-10)


# --- duality ---------------------------------------------------------------------

def test_dual_transform_constants(presets):
    for mu in presets.values():
        assert cauchy_dual_transform(CPoly([2.0 + 1j]), mu, 0.3 - 0.2j) \
            == pytest.approx(2.0 + 1j)


def test_dual_transform_zero_measure_reproduces(rng):
    zero = MeasureSpec(label="zero")
    f = random_poly(rng, 5)
    lam = 0.44 + 0.21j
    assert cauchy_dual_transform(f, zero, lam) == pytest.approx(poly_eval(f, lam))


def test_dual_transform_atom_closed_form(presets):
    # for a unit mass at 1 and f = z the transform is lam + lam/(1-lam)
    q = CPoly([0, 1.0])
    for lam in (0.2, 0.5j, -0.6 + 0.2j):
        got = cauchy_dual_transform(q, presets["atom1"], lam)
        assert got == pytest.approx(lam + lam / (1 - lam), rel=1e-12)


def test_dual_transform_coefficient_oracle(presets, rng):
    f = random_poly(rng, 5)
    for name, mu in presets.items():
        g = gram_matrix("dmu", mu, f.degree)
        pad = np.zeros(g.degree + 1, dtype=complex)
        pad[: len(f.coeffs)] = f.coeffs
        want = pad @ g.matrix
        got = dual_transform_taylor(f, mu, f.degree, method="exact")
        assert np.max(np.abs(got - want)) <= 1e-10 * max(1.0, np.max(np.abs(want)))


def test_dual_transform_quadrature_route(presets, rng):
    # the independent quadrature evaluation agrees with the moment route
    f = random_poly(rng, 4)
    for name, tol in [("dirichlet", 1e-10), ("hardy", 1e-9), ("alpha", 2e-5)]:
        mu = presets[name]
        lam = 0.35 - 0.2j
        a = cauchy_dual_transform(f, mu, lam, method="exact")
        b = cauchy_dual_transform(f, mu, lam, method="quadrature")
        assert abs(a - b) <= tol * max(1.0, abs(a))


def test_duality_pairing_examples(presets, rng):
    one = CPoly([1.0])
    for mu in presets.values():
        assert duality_pairing_check(one, one, mu) <= 1e-10
    z = CPoly([0, 1.0])
    assert duality_pairing_check(z, z, presets["dirichlet"]) <= 1e-10
    for mu in presets.values():
        for _ in range(4):
            p = random_poly(rng, int(rng.integers(0, 9)))
            q = random_poly(rng, int(rng.integers(0, 9)))
            scale = np.sqrt(dmu_norm_sq(p, mu) * dmu_norm_sq(q, mu))
            assert duality_pairing_check(p, q, mu) <= 1e-8 * scale


# --- harmonic space and Green ----------------------------------------------------

def test_hd_examples(presets):
    two_cos = TrigPoly.from_pairs([(1, 1.0), (-1, 1.0)])
    assert hd_norm_sq(two_cos, presets["dirichlet"]) == pytest.approx(4.0)
    anti = TrigPoly.from_pairs([(-2, 1.0)])
    assert hd_norm_sq(anti, presets["atom1"]) == pytest.approx(3.0)


def test_hd_analytic_degenerate(presets, rng):
    f = random_poly(rng, 5)
    trig = TrigPoly.from_pairs([(k, c) for k, c in enumerate(f.coeffs)])
    want = h2_norm_sq(f) + dmu_seminorm_sq(f, presets["hardy"], "measure")
    assert hd_norm_sq(trig, presets["hardy"]) == pytest.approx(want, rel=1e-12)


def test_green_examples(rng):
    assert green_check(CPoly([3.0])) <= 1e-14
    assert green_check(CPoly([0, 1.0])) <= 1e-12
    for _ in range(3):
        p = random_poly(rng, 10)
        assert green_check(p) <= 1e-8 * h2_norm_sq(p)
