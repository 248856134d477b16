"""Acceptance suite: one callable per criterion, shared by pytest and the
service/CLI `selftest`.

Each criterion pins its tolerances here; the functions return a result
record with pass/fail, the worst observed deviation and the runtime, and
never raise on numerical failure (only on programming errors).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import corona as corona_mod
from . import measures, multiplier, potential, quadrature, spaces
from .poly import CPoly, h2_norm_sq, poly_eval

__all__ = ["CriterionResult", "run_all", "CRITERIA"]


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    limit_seconds: float
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.index:2d} {self.name} ({self.seconds:.2f}s)"


def _presets():
    return {
        "dirichlet": measures.make_measure("dirichlet"),
        "hardy": measures.make_measure("hardy"),
        "alpha": measures.make_measure("alpha", alpha=0.5),
        "atom1": measures.make_measure("atoms", atoms=[(1.0, 1.0)]),
    }


def _rand_poly(rng, degree: int) -> CPoly:
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return CPoly(c)


def criterion_01_dirichlet_weights() -> CriterionResult:
    """U = V = 1 for the Dirichlet preset at 100 interior points."""
    mu = measures.make_measure("dirichlet")
    rng = np.random.default_rng(101)
    z = 0.9 * np.sqrt(rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
    err = max(float(np.max(np.abs(potential.eval_U(mu, z) - 1.0))),
              float(np.max(np.abs(potential.eval_V(mu, z) - 1.0))))
    return CriterionResult(1, "dirichlet weights U=V=1 (abs<=1e-8)", err <= 1e-8,
                           1.0, details={"max_abs_error": err})


def criterion_02_monomial_norms() -> CriterionResult:
    """||z^k||^2 = 1+k for the Dirichlet preset, all three modes, k=0..8."""
    mu = measures.make_measure("dirichlet")
    worst = 0.0
    for k in range(9):
        f = CPoly.monomial(k)
        want = 1.0 + k
        for mode in ("u", "v", "measure"):
            got = spaces.dmu_norm_sq(f, mu, mode=mode)
            worst = max(worst, abs(got - want) / want)
    return CriterionResult(2, "dirichlet monomial norms 1+k (rel<=1e-6)",
                           worst <= 1e-6, 10.0, details={"max_rel_error": worst})


def criterion_03_local_dirichlet() -> CriterionResult:
    """Boundary-method exactness and area/boundary agreement."""
    worst_exact = 0.0
    for k in range(1, 9):
        f = CPoly.monomial(k)
        worst_exact = max(worst_exact, abs(spaces.local_dirichlet(f, 0.0) - 1.0))
        lam = np.exp(1j * 0.73 * k)
        worst_exact = max(worst_exact, abs(spaces.local_dirichlet(f, lam) - k) / k)
    rng = np.random.default_rng(303)
    rule = quadrature.disk_rule(96, 192)
    worst_area = 0.0
    for _ in range(30):
        f = _rand_poly(rng, int(rng.integers(1, 11)))
        if rng.random() < 0.2:
            lam = complex(np.exp(2j * np.pi * rng.random()))
        else:
            lam = complex(0.95 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))
        b = spaces.local_dirichlet(f, lam, "boundary")
        a = spaces.local_dirichlet(f, lam, "area", rule=rule)
        worst_area = max(worst_area, abs(a - b) / max(b, 1e-300))
    ok = worst_exact <= 1e-12 and worst_area <= 1e-5
    return CriterionResult(3, "local Dirichlet: exact boundary, area agrees (1e-5)",
                           ok, 30.0, details={"boundary_error": worst_exact,
                                              "area_rel_error": worst_area})


def criterion_04_shift_identity() -> CriterionResult:
    """D_lam(g) = |Lg(lam)|^2 + D_lam(Lg) for random data."""
    from .poly import backward_shift

    rng = np.random.default_rng(404)
    worst = 0.0
    for _ in range(20):
        g = _rand_poly(rng, int(rng.integers(1, 11)))
        if rng.random() < 0.3:
            lam = complex(np.exp(2j * np.pi * rng.random()))
        else:
            lam = complex(np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))
        lg = backward_shift(g)
        lhs = spaces.local_dirichlet(g, lam)
        rhs = abs(poly_eval(lg, lam)) ** 2 + spaces.local_dirichlet(lg, lam)
        worst = max(worst, abs(lhs - rhs) / max(lhs, 1e-300))
    return CriterionResult(4, "backward-shift identity (rel<=1e-10)", worst <= 1e-10,
                           5.0, details={"max_rel_error": worst})


def criterion_05_green_identity() -> CriterionResult:
    """Hardy norm equals the Green form for random degree-<=12 polynomials."""
    rng = np.random.default_rng(505)
    rule = quadrature.disk_rule(64, 128)
    worst = 0.0
    for _ in range(10):
        p = _rand_poly(rng, int(rng.integers(0, 13)))
        res = spaces.green_check(p, rule=rule)
        worst = max(worst, res / max(h2_norm_sq(p), 1e-300))
    return CriterionResult(5, "Green/Hardy identity (rel<=1e-8)", worst <= 1e-8,
                           5.0, details={"max_rel_residual": worst})


def criterion_06_duality_pairing() -> CriterionResult:
    """Boundary pairing equals the D(mu) inner product on four presets."""
    rng = np.random.default_rng(606)
    worst = 0.0
    for mu in _presets().values():
        for _ in range(20):
            p = _rand_poly(rng, int(rng.integers(0, 9)))
            q = _rand_poly(rng, int(rng.integers(0, 9)))
            res = spaces.duality_pairing_check(p, q, mu)
            scale = np.sqrt(spaces.dmu_norm_sq(p, mu) * spaces.dmu_norm_sq(q, mu))
            worst = max(worst, res / max(scale, 1e-300))
    return CriterionResult(6, "Cauchy duality pairing (<=1e-8 ||p|| ||q||)",
                           worst <= 1e-8, 60.0, details={"max_scaled_residual": worst})


def criterion_07_v_envelope() -> CriterionResult:
    """Two-sided Poisson envelope at 200 samples per preset.

    Upper constant 4 (the constant-2 variant is provably false for
    boundary atoms; see EnvelopeReport and the counterexample test).
    """
    rng = np.random.default_rng(707)
    ok = True
    worst: dict = {}
    for name, mu in _presets().items():
        z = 0.97 * np.sqrt(rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
        rep = potential.check_v_envelope(mu, z, slack=1e-9)
        ok = ok and rep.ok
        worst[name] = len(rep.violations)
    return CriterionResult(7, "V envelope mass/4 <= V <= 4 mass/(1-|z|^2)", ok,
                           5.0, details={"violations": worst})


def criterion_08_shift_contraction() -> CriterionResult:
    """Multiplication by z contracts the Cauchy dual at every degree <= 20."""
    worst = 0.0
    for mu in _presets().values():
        for N in (0, 5, 10, 20):
            worst = max(worst, multiplier.shift_norm("emu", mu, N))
    return CriterionResult(8, "shift contraction on E(mu) (<=1+1e-8)",
                           worst <= 1.0 + 1e-8, 30.0, details={"max_norm": worst})


def criterion_09_pick_positivity() -> CriterionResult:
    """Pick matrices of contractive multipliers on the dual kernel."""
    rng = np.random.default_rng(909)
    pts = 0.6 * np.sqrt(rng.random(6)) * np.exp(2j * np.pi * rng.random(6))
    phis = [CPoly([0, 1.0]), CPoly([0, 0, 1.0]), CPoly([0, 0.5, 0.5])]
    worst = 0.0
    for name in ("dirichlet", "hardy"):
        mu = _presets()[name]
        for phi in phis:
            m = multiplier.pick_positivity("emu", mu, 20, phi, pts)
            worst = min(worst, m)
    return CriterionResult(9, "Pick positivity on E(mu) kernel (>=-1e-6)",
                           worst >= -1e-6, 30.0, details={"min_eig": worst})


def criterion_10_kernel_estimate() -> CriterionResult:
    """Weighted kernel inequality: ratio stability and the radial base case."""
    rng = np.random.default_rng(1010)
    samples = []
    for _ in range(20):
        lam = 0.95 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        if rng.random() < 0.3:
            zeta = np.exp(2j * np.pi * rng.random())
        else:
            zeta = np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        samples.append((lam, zeta))
    rep = potential.check_kernel_estimate(0.5, 3.0, 2.0, samples)
    base = potential.check_kernel_estimate(0.5, 3.0, 2.0, [(0.0, 0.0)])
    base_err = abs(base.max_ratio - 1.0 / 1.5)
    ok = (np.all(np.isfinite(rep.ratios)) and rep.refinement_change <= 0.05
          and base_err <= 1e-8)
    return CriterionResult(10, "kernel estimate ratios stable, base 1/(s+1)", bool(ok),
                           60.0, details={"max_ratio": rep.max_ratio,
                                          "refinement_change": rep.refinement_change,
                                          "base_error": base_err})


def _corona_instance(mu, delta=None):
    f = [CPoly([0.0, 1.0]), CPoly([1.0, -0.5])]
    h = CPoly([1.0])
    prob = corona_mod.CoronaProblem.build(f, h, mu, delta=delta)
    sol = corona_mod.corona_solve(prob)
    return prob, sol


def criterion_11_corona_end_to_end() -> CriterionResult:
    """Corona solve+verify on f=(z, 1-z/2), h=1 over three measures."""
    presets = _presets()
    delta = np.sqrt(0.8)
    details = {}
    ok = True
    for name in ("dirichlet", "atom1", "alpha"):
        prob, sol = _corona_instance(presets[name], delta=delta)
        ver = corona_mod.corona_verify(sol, prob)
        good = (ver.bezout_residual <= 1e-6
                and max(ver.dbar_residuals) <= 1e-4
                and max(ver.fit_residuals) <= 1e-6
                and all(np.isfinite(ver.g_norms))
                and max(ver.bound_ratios) <= 1.0)
        ok = ok and good
        details[name] = {
            "bezout": ver.bezout_residual,
            "dbar": max(ver.dbar_residuals),
            "fit": max(ver.fit_residuals),
            "ratio": max(ver.bound_ratios),
        }
    return CriterionResult(11, "corona end-to-end (3 measures)", ok, 300.0,
                           details=details)


def criterion_12_corona_invariants() -> CriterionResult:
    """Partition of unity, Koszul cancellation, linearity, trivial case."""
    rng = np.random.default_rng(1212)
    f = [CPoly([0.0, 1.0]), CPoly([1.0, -0.5])]
    z = 0.98 * np.sqrt(rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
    kos = corona_mod.koszul_fields(f, CPoly([1.0]), z)
    fv = np.stack([poly_eval(fj, z) for fj in f])
    partition = float(np.max(np.abs(np.sum(fv * kos.phi, axis=0) - 1.0)))

    mu = measures.make_measure("dirichlet")
    delta = np.sqrt(0.8)
    h1 = CPoly([1.0, 0.3])
    h2 = CPoly([0.0, 0.5, -0.2j])
    p1, s1 = corona_mod.CoronaProblem.build(f, h1, mu, delta=delta), None
    s1 = corona_mod.corona_solve(p1, refine_check=False)
    p2 = corona_mod.CoronaProblem.build(f, h2, mu, delta=delta)
    s2 = corona_mod.corona_solve(p2, refine_check=False)
    p12 = corona_mod.CoronaProblem.build(f, h1 + h2, mu, delta=delta)
    s12 = corona_mod.corona_solve(p12, refine_check=False)
    scale = max(float(np.max(np.abs(s12.g_values))), 1e-300)
    lin = float(np.max(np.abs(s12.g_values - s1.g_values - s2.g_values))) / scale

    # Koszul cancellation: the correction sum annihilates f
    fv_grid = np.stack([poly_eval(fj, s1.grid) for fj in f])
    hv_grid = poly_eval(h1, s1.grid)
    kos_grid = corona_mod.koszul_fields(f, h1, s1.grid)
    quotient = np.einsum("jg,jg->g", fv_grid, kos_grid.phi * hv_grid[None, :])
    bezout = np.einsum("jg,jg->g", fv_grid, s1.g_values)
    koszul = float(np.max(np.abs(bezout - quotient)) / max(np.max(np.abs(bezout)), 1e-300))

    trivial_prob = corona_mod.CoronaProblem.build([CPoly([1.0])], CPoly([0.3, 0.7j]),
                                                  mu, delta=1.0)
    triv = corona_mod.corona_solve(trivial_prob, refine_check=False)
    triv_res = max(triv.bezout_residual_grid, max(triv.fit_residuals))
    triv_ratio_err = abs(triv.bound_ratios[0] - 1.0)

    ok = (partition <= 1e-12 and koszul <= 1e-10 and lin <= 1e-9
          and triv_res <= 1e-10 and triv_ratio_err <= 1e-12)
    return CriterionResult(12, "corona invariants", bool(ok), 60.0,
                           details={"partition": partition, "koszul": koszul,
                                    "linearity": lin, "trivial": triv_res,
                                    "trivial_ratio_err": triv_ratio_err})


def criterion_13_multiplier_coherence() -> CriterionResult:
    """Multiplier bound of z and its certificate on the Dirichlet preset."""
    mu = measures.make_measure("dirichlet")
    z = CPoly([0.0, 1.0])
    lb = multiplier.multiplier_norm_lb(z, mu, 20)
    cert = multiplier.multiplier_certificate(z, mu, N=20)
    ok = (1.0 - 1e-12 <= lb <= np.sqrt(2.0) + 1e-12
          and abs(cert.sup_circle - 1.0) <= 1e-12
          and cert.carleson.constant <= 1.0 + 1e-6)
    return CriterionResult(13, "multiplier/Carleson coherence for z", bool(ok),
                           30.0, details={"norm_lb": lb, "sup_circle": cert.sup_circle,
                                          "carleson": cert.carleson.constant})


CRITERIA = [
    criterion_01_dirichlet_weights,
    criterion_02_monomial_norms,
    criterion_03_local_dirichlet,
    criterion_04_shift_identity,
    criterion_05_green_identity,
    criterion_06_duality_pairing,
    criterion_07_v_envelope,
    criterion_08_shift_contraction,
    criterion_09_pick_positivity,
    criterion_10_kernel_estimate,
    criterion_11_corona_end_to_end,
    criterion_12_corona_invariants,
    criterion_13_multiplier_coherence,
]


def run_all(indices=None) -> list[CriterionResult]:
    out = []
    for i, fn in enumerate(CRITERIA, start=1):
        if indices and i not in indices:
            continue
        t0 = time.time()
        res = fn()
        res.seconds = time.time() - t0
        res.passed = bool(res.passed and res.seconds <= res.limit_seconds)
        out.append(res)
    return out
