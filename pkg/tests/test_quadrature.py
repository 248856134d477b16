import numpy as np
import pytest
from scipy.integrate import quad

from dmu import (cauchy_transform_field, circle_rule, disk_rule, graded_disk_rule,
                 integrate, log_kernel_integral)
from dmu.quadrature import gauss_panels


def test_circle_rule_examples():
    assert integrate(circle_rule(4), lambda z: np.ones_like(z)) == pytest.approx(1.0)
    r8 = circle_rule(8)
    assert integrate(r8, lambda z: z ** 3 * np.conj(z) ** 3) == pytest.approx(1.0)
    assert abs(integrate(r8, lambda z: z ** 2)) <= 1e-15


def test_circle_rule_h2_orthonormality():
    r = circle_rule(16)
    val = integrate(r, lambda z: z * np.conj(z))
    assert val == pytest.approx(1.0, abs=1e-14)


def test_circle_rule_rejects_zero():
    with pytest.raises(ValueError):
        circle_rule(0)


def test_disk_rule_examples():
    r = disk_rule(24, 48)
    assert integrate(r, lambda w: np.ones_like(w)) == pytest.approx(1.0, abs=1e-14)
    assert integrate(r, lambda w: np.abs(w) ** 2) == pytest.approx(0.5, abs=1e-14)
    assert integrate(r, lambda w: 1 - np.abs(w) ** 2) == pytest.approx(0.5, abs=1e-14)
    assert integrate(r, lambda w: np.abs(w) ** 4) == pytest.approx(1 / 3, abs=1e-13)
    assert abs(integrate(r, lambda w: w * np.conj(w) ** 2)) <= 1e-15


def test_disk_rule_monomial_exactness():
    r = disk_rule(10, 21)
    for a, b in [(0, 0), (3, 3), (7, 7), (5, 2), (0, 9), (9, 9)]:
        want = 1.0 / (a + 1) if a == b else 0.0
        got = integrate(r, lambda w: w ** a * np.conj(w) ** b)
        assert got == pytest.approx(want, abs=1e-13)


def test_disk_rule_nodes_interior_weights_sum():
    r = disk_rule(16, 32)
    assert np.all(np.abs(r.nodes) < 1.0)
    assert np.sum(r.weights) == pytest.approx(1.0, abs=1e-14)


def test_integrate_rejects_nonfinite():
    r = disk_rule(4, 8)
    with np.errstate(divide="ignore", invalid="ignore"):
        with pytest.raises(ValueError):
            integrate(r, lambda w: 1.0 / (w - r.nodes[0, 0]))


def test_log_kernel_zero_integrand():
    rule = disk_rule(32, 64)
    assert log_kernel_integral(lambda w: np.zeros_like(w, dtype=float), 0.3, rule) == 0.0


def test_log_kernel_center_value_against_1d_oracle():
    # integral over the disk of log(1/|w|^2) equals 2 * int_0^1 2r log(1/r) dr
    oracle, err = quad(lambda r: 2.0 * 2.0 * r * np.log(1.0 / r), 0.0, 1.0)
    assert err < 1e-12
    assert oracle == pytest.approx(1.0, abs=1e-12)
    rule = disk_rule(64, 128)
    got = log_kernel_integral(lambda w: np.ones_like(w, dtype=float), 0.0, rule)
    assert got == pytest.approx(oracle, abs=1e-10)


def test_log_kernel_matches_hardy_weight_everywhere():
    # with F == 1 the integral is the superharmonic weight of the measure
    # (1-|w|^2) dA, which is 1-|z|^2 in closed form
    rule = disk_rule(72, 144)
    for z in [0.2, 0.5 + 0.3j, -0.8j, 0.9]:
        got = log_kernel_integral(lambda w: np.ones_like(w, dtype=float), z, rule)
        assert got == pytest.approx(1.0 - abs(z) ** 2, abs=1e-10)


def test_log_kernel_refinement_consistency():
    F = lambda w: np.exp(-np.abs(w) ** 2) * (1.0 + np.real(w))
    coarse = disk_rule(64, 128)
    fine = disk_rule(96, 256)
    for z in [0.1, 0.45 - 0.3j, 0.7j]:
        a = log_kernel_integral(F, z, coarse)
        b = log_kernel_integral(F, z, fine)
        assert abs(a - b) < 1e-6


def test_log_kernel_rejects_outside():
    rule = disk_rule(16, 32)
    with pytest.raises(ValueError):
        log_kernel_integral(lambda w: np.ones_like(w, dtype=float), 1.1, rule)


def test_cauchy_zero_field():
    rule = disk_rule(24, 48)
    F = np.zeros(rule.nodes.shape, dtype=complex)
    out = cauchy_transform_field(rule, F, [0.3, -0.5j])
    assert np.all(out == 0)


def test_cauchy_constant_exact_identity():
    rule = disk_rule(48, 96)
    F = np.ones(rule.nodes.shape, dtype=complex)
    targets = np.array([0.5 + 0.3j, -0.9j, 0.0, 0.999, 1.0])
    out = cauchy_transform_field(rule, F, targets)
    assert np.max(np.abs(out - np.conj(targets))) < 1e-13


def test_cauchy_monomial_closed_forms():
    # transform of conj(w) is conj(z)^2/2; transform of w is |z|^2 - 1
    rule = disk_rule(64, 128)
    targets = np.array([0.4 + 0.2j, -0.7, 0.3j, 0.0])
    out1 = cauchy_transform_field(rule, np.conj(rule.nodes), targets)
    assert np.max(np.abs(out1 - np.conj(targets) ** 2 / 2)) < 1e-13
    out2 = cauchy_transform_field(rule, rule.nodes.astype(complex), targets)
    assert np.max(np.abs(out2 - (np.abs(targets) ** 2 - 1))) < 1e-13


def test_cauchy_linearity():
    rule = disk_rule(48, 96)
    rng = np.random.default_rng(3)
    F = rng.normal(size=rule.nodes.shape) + 1j * rng.normal(size=rule.nodes.shape)
    G = np.exp(rule.nodes)
    targets = np.array([0.2, 0.6j, -0.4 - 0.4j])
    lhs = cauchy_transform_field(rule, 2.0 * F + 3j * G, targets)
    rhs = (2.0 * cauchy_transform_field(rule, F, targets)
           + 3j * cauchy_transform_field(rule, G, targets))
    scale = np.max(np.abs(rhs))
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


def test_cauchy_dbar_consistency():
    # finite-difference dbar of the transform reproduces the field
    rule = disk_rule(96, 192)
    F = np.exp(rule.nodes) * np.conj(rule.nodes) ** 2
    probes = np.array([0.3 + 0.2j, -0.5j, 0.55])
    eps = 1e-4
    sten = np.concatenate([probes + eps, probes - eps,
                           probes + 1j * eps, probes - 1j * eps])
    a = cauchy_transform_field(rule, F, sten)
    e, w_, n, s = np.split(a, 4)
    dbar = ((e - w_) + 1j * (n - s)) / (4 * eps)
    want = np.exp(probes) * np.conj(probes) ** 2
    assert np.max(np.abs(dbar - want)) < 1e-6


def test_cauchy_brute_force_cross_check():
    # brute force: high-resolution rule with a small disk around the
    # target excluded (the excluded mass is O(eps^3))
    rule = disk_rule(96, 192)
    F = np.exp(rule.nodes) * np.conj(rule.nodes)
    z = 0.41 + 0.13j
    got = cauchy_transform_field(rule, F, [z])[0]
    big = disk_rule(600, 1200)
    Fb = np.exp(big.nodes) * np.conj(big.nodes)
    d = big.nodes - z
    mask = np.abs(d) > 4e-3
    brute = np.sum((Fb * big.weights)[mask] / (z - big.nodes)[mask])
    assert abs(got - brute) < 5e-4


def test_cauchy_rejects_outside_targets():
    rule = disk_rule(16, 32)
    F = np.ones(rule.nodes.shape, dtype=complex)
    with pytest.raises(ValueError):
        cauchy_transform_field(rule, F, [1.5])


def test_graded_rule_boundary_singularity():
    rule = graded_disk_rule(n_theta=64)
    got = integrate(rule, lambda w: (1.0 - np.abs(w) ** 2) ** (-0.5))
    # integral of (1-x)^(-1/2) dx = 2
    assert got == pytest.approx(2.0, rel=1e-6)


def test_gauss_panels_log_singularity():
    x, w = gauss_panels(0.0, 1.0, panels=40, pts=16, grade="left")
    got = float(np.sum(w * np.log(1.0 / x)))
    assert got == pytest.approx(1.0, abs=1e-13)
