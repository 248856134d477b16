import numpy as np
import pytest

from dmu import (check_kernel_estimate, check_v_envelope, circle_rule, disk_rule,
                 eval_U, eval_V, integrate, make_measure, total_mass, weight_field)
from dmu.measures import MeasureSpec, merge_measures


def test_dirichlet_weights_unit(presets):
    z = np.array([0.0, 0.3 + 0.2j, -0.85j, 0.6 - 0.5j])
    assert np.allclose(eval_U(presets["dirichlet"], z), 1.0, atol=1e-14)
    assert np.allclose(eval_V(presets["dirichlet"], z), 1.0, atol=1e-14)


def test_dirichlet_u_against_circle_quadrature(presets):
    # independent oracle: Poisson integral of the density by circle rule
    rule = circle_rule(512)
    for z in [0.4 + 0.1j, -0.7j]:
        poisson = (1 - abs(z) ** 2) / np.abs(1 - np.conj(rule.nodes) * z) ** 2
        oracle = float(np.sum(rule.weights * poisson * 1.0))
        assert eval_U(presets["dirichlet"], z) == pytest.approx(oracle, abs=1e-10)


def test_boundary_atom_poisson(presets):
    mu = presets["atom1"]
    assert eval_U(mu, 0.0) == pytest.approx(1.0)
    z = 0.3 - 0.4j
    want = (1 - abs(z) ** 2) / abs(1 - z) ** 2
    assert eval_U(mu, z) == pytest.approx(want, rel=1e-14)
    assert eval_V(mu, z) == pytest.approx(want, rel=1e-14)


def test_interior_atom_log_weight():
    mu = make_measure("atoms", atoms=[(0.0, 1.0)])
    assert eval_U(mu, 0.5) == pytest.approx(np.log(4.0), rel=1e-14)
    assert np.isinf(eval_U(mu, 0.0))
    # V stays finite
    assert eval_V(mu, 0.0) == pytest.approx(1.0)


def test_hardy_weights_closed_forms(presets):
    z = np.array([0.0, 0.35, 0.6j, -0.72 + 0.1j])
    assert np.allclose(eval_U(presets["hardy"], z), 1 - np.abs(z) ** 2, atol=1e-12)
    assert eval_V(presets["hardy"], 0.0) == pytest.approx(0.5, rel=1e-13)


def test_v_against_2d_quadrature(presets):
    # independent route: integrate the Poisson kernel against the density
    # (graded rule: the alpha density has a boundary power singularity)
    from dmu import graded_disk_rule

    rule = graded_disk_rule(n_theta=256)
    for name, tol in [("hardy", 1e-9), ("alpha", 1e-6)]:
        mu = presets[name]
        for z in [0.3, 0.5j]:
            oracle = float(np.real(integrate(
                rule, lambda w: (1 - abs(z) ** 2) / np.abs(1 - np.conj(w) * z) ** 2
                * mu.disk(w))))
            assert eval_V(mu, z) == pytest.approx(oracle, rel=tol)


def test_alpha_v_at_zero_equals_mass(presets):
    assert eval_V(presets["alpha"], 0.0) == pytest.approx(2 / 3, rel=1e-12)


def test_weight_additivity():
    mu1 = make_measure("hardy")
    mu2 = make_measure("atoms", atoms=[(0.5, 1.25)])
    merged = merge_measures("sum", mu1, mu2)
    z = np.array([0.3 + 0.1j, -0.55j])
    for f in (eval_U, eval_V):
        assert np.allclose(f(merged, z), f(mu1, z) + f(mu2, z), rtol=1e-10)


def test_weight_positivity(presets, rng):
    z = 0.95 * np.sqrt(rng.random(50)) * np.exp(2j * np.pi * rng.random(50))
    for mu in presets.values():
        assert np.all(eval_U(mu, z) > 0)
        assert np.all(eval_V(mu, z) > 0)


def test_log_kernel_dominates_poisson_product(rng):
    # pointwise comparability backing the norm equivalence:
    # log|(1 - conj(zeta) z)/(z - zeta)|^2 >= (1-|z|^2)(1-|zeta|^2)/|1-conj(zeta) z|^2
    z = 0.97 * np.sqrt(rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
    zeta = 0.97 * np.sqrt(rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
    mask = np.abs(z - zeta) > 1e-6
    z, zeta = z[mask], zeta[mask]
    log_k = np.log(np.abs((1 - np.conj(zeta) * z) / (z - zeta)) ** 2)
    poisson = (1 - np.abs(z) ** 2) * (1 - np.abs(zeta) ** 2) \
        / np.abs(1 - np.conj(zeta) * z) ** 2
    assert np.all(log_k >= poisson - 1e-12)


def test_envelope_examples(presets):
    rep = check_v_envelope(presets["dirichlet"], [0.0])
    assert rep.ok and rep.lower[0] == pytest.approx(0.25) and rep.values[0] == 1.0
    rep = check_v_envelope(presets["atom1"], [0.0])
    assert rep.ok
    rep = check_v_envelope(presets["hardy"], [0.0])
    assert rep.ok and rep.lower[0] == pytest.approx(0.125) and rep.values[0] == 0.5


def test_envelope_all_presets(presets, rng):
    z = 0.97 * np.sqrt(rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
    for mu in presets.values():
        assert check_v_envelope(mu, z).ok


def test_envelope_constant_two_counterexample(presets):
    """The upper envelope needs constant 4: with constant 2 a unit mass at
    zeta = 1 already violates the bound at z = 0.7 (V = 5.66 > 3.92).
    This pins why the report uses 4 mass/(1-|z|^2)."""
    mu = presets["atom1"]
    z = 0.7
    v = eval_V(mu, z)
    mass = total_mass(mu)
    assert v > 2.0 * mass / (1 - abs(z) ** 2) + 1e-6   # constant 2 fails
    assert v <= 4.0 * mass / (1 - abs(z) ** 2) + 1e-9  # constant 4 holds


def test_kernel_estimate_base_case():
    rep = check_kernel_estimate(0.5, 3.0, 2.0, [(0.0, 0.0)])
    assert rep.max_ratio == pytest.approx(1.0 / 1.5, abs=1e-8)


def test_kernel_estimate_corner_sample():
    rep = check_kernel_estimate(0.5, 3.0, 2.0, [(0.0, 1.0)])
    assert np.isfinite(rep.max_ratio)
    assert rep.refinement_change < 0.05


def test_kernel_estimate_parameter_validation():
    with pytest.raises(ValueError):
        check_kernel_estimate(0.5, 2.0, 2.0, [(0.0, 0.0)])   # t < s+2 < r broken
    with pytest.raises(ValueError):
        check_kernel_estimate(-2.0, 3.0, 2.0, [(0.0, 0.0)])
    with pytest.raises(ValueError):
        check_kernel_estimate(0.5, 3.0, 2.0, [(1.0, 0.0)])   # lambda on the circle


def test_weight_field_rows(presets):
    field = weight_field(presets["hardy"], [0.25, 0.5j])
    rows = list(field.rows())
    assert rows[0][2] == pytest.approx(1 - 0.25 ** 2)
    assert len(rows) == 2
