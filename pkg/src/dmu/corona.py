"""Constructive corona solver with end-to-end verification.

Given polynomials f_1..f_n with |f| >= delta > 0 on the closed disk and
a target h, the smooth quotients phi_j = conj(f_j)/|f|^2 solve
sum f_j (phi_j h) = h but are not holomorphic. The correction

    g_j = phi_j h + sum_k (a_jk - a_kj) f_k,
    a_jk = Cauchy transform of phi_j dbar(phi_k) h,

removes the dbar while preserving the identity, because the correction
term is antisymmetric in (j, k) and therefore cancels against f_j f_k.
The solver samples the correction fields on a polar grid, applies the
modal Cauchy transform, fits polynomial representatives, and reports
Bezout, holomorphy and norm-bound diagnostics.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import modal, quadrature, spaces
from .measures import MeasureSpec
from .poly import CPoly, poly_derivative, poly_eval

__all__ = [
    "DeltaCertificate",
    "CoronaProblem",
    "CoronaSolution",
    "CoronaVerification",
    "KoszulFields",
    "certify_delta",
    "koszul_fields",
    "corona_solve",
    "corona_verify",
]


class CoronaConditionError(ValueError):
    """The lower bound on |f| could not be certified positive."""


class CoronaInstabilityError(RuntimeError):
    """Transform values moved more than tolerated under rule refinement."""


@dataclass(frozen=True)
class DeltaCertificate:
    delta: float
    grid_min: float
    lipschitz: float
    covering_radius: float
    n_radial: int
    n_angular: int
    source: str = "grid+lipschitz"


def certify_delta(f: Sequence[CPoly], n_radial: int = 320,
                  n_angular: int = 1024) -> DeltaCertificate:
    """Certified positive lower bound for min over the closed disk of |f|.

    Evaluates |f| on a dense polar grid including the boundary circle and
    subtracts a Lipschitz correction: each |f_j| is Lipschitz with
    constant at most the coefficient-magnitude sum of f_j', so |f| moves
    at most L * (covering radius) between grid points.
    """
    if not f:
        raise ValueError("need at least one corona datum")
    radii = np.linspace(0.0, 1.0, n_radial + 1)
    th = 2.0 * np.pi * np.arange(n_angular) / n_angular
    grid = radii[:, None] * np.exp(1j * th)[None, :]
    absf2 = np.zeros(grid.shape)
    for fj in f:
        absf2 += np.abs(poly_eval(fj, grid)) ** 2
    grid_min = float(np.sqrt(np.min(absf2)))
    lips = sum(float(np.sum(np.abs(poly_derivative(fj).coeffs))) for fj in f)
    covering = 0.5 * math.hypot(1.0 / n_radial, 2.0 * np.pi / n_angular)
    delta = grid_min - lips * covering
    if delta <= 0.0:
        raise CoronaConditionError(
            f"cannot certify a positive bound: grid min {grid_min:.3e}, "
            f"Lipschitz slack {lips * covering:.3e}")
    return DeltaCertificate(delta=delta, grid_min=grid_min, lipschitz=lips,
                            covering_radius=covering, n_radial=n_radial,
                            n_angular=n_angular)


@dataclass(frozen=True)
class CoronaProblem:
    f: tuple[CPoly, ...]
    h: CPoly
    mu: MeasureSpec
    delta: float
    delta_source: str = "user"

    def __post_init__(self):
        if len(self.f) < 1:
            raise ValueError("need n >= 1 corona data")
        if not (self.delta > 0.0):
            raise ValueError("need delta > 0")

    @classmethod
    def build(cls, f: Sequence[CPoly], h: CPoly, mu: MeasureSpec,
              delta: float | None = None) -> "CoronaProblem":
        if delta is None:
            cert = certify_delta(f)
            return cls(f=tuple(f), h=h, mu=mu, delta=cert.delta,
                       delta_source=cert.source)
        return cls(f=tuple(f), h=h, mu=mu, delta=float(delta), delta_source="user")

    def to_json(self) -> dict:
        out = {
            "measure": self.mu.to_json(),
            "f": [fj.to_json() for fj in self.f],
            "h": self.h.to_json(),
            "delta": self.delta,
            "delta_source": self.delta_source,
        }
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CoronaProblem":
        mu = MeasureSpec.from_json(data["measure"])
        f = [CPoly.from_json(c) for c in data["f"]]
        h = CPoly.from_json(data["h"])
        delta = data.get("delta")
        return cls.build(f, h, mu, delta=delta)


@dataclass(frozen=True)
class KoszulFields:
    """Pointwise quotient fields for corona data at given points."""

    phi: np.ndarray                  # (n, ...) values of conj(f_j)/|f|^2
    phi_dbar_phi: np.ndarray         # (n, n, ...) values of phi_j dbar(phi_k)
    d_phi_dbar_phi: np.ndarray       # (n, n, ...) values of d(phi_j dbar(phi_k))


def koszul_fields(f: Sequence[CPoly], h: CPoly, z) -> KoszulFields:
    """Closed-form quotient fields; only f and f' enter the formulas.

    With S = sum |f_l|^2, A = sum f_l conj(f_l'), B = conj(A) and
    C = sum |f_l'|^2:

      phi_j           = conj(f_j) / S
      phi_j dbar phi_k = conj(f_j) (conj(f_k') S - conj(f_k) A) / S^3
      d(phi_j dbar phi_k) = -conj(f_j) B / S^2 * (conj(f_k')/S - conj(f_k) A / S^2)
            + conj(f_j)/S * (-conj(f_k') B / S^2 + 2 conj(f_k) A B / S^3 - conj(f_k) C / S^2)
    """
    z = np.asarray(z, dtype=complex)
    n = len(f)
    fv = np.stack([poly_eval(fj, z) for fj in f])
    fpv = np.stack([poly_eval(poly_derivative(fj), z) for fj in f])
    S = np.sum(np.abs(fv) ** 2, axis=0)
    if np.any(S <= 0.0):
        raise ZeroDivisionError("corona data vanish at an evaluation point")
    A = np.sum(fv * np.conj(fpv), axis=0)
    B = np.conj(A)
    C = np.sum(np.abs(fpv) ** 2, axis=0)
    phi = np.conj(fv) / S
    dbar_phi = np.conj(fpv) / S - np.conj(fv) * A / S ** 2      # dbar(phi_k), shape (n, ...)
    pdp = phi[:, None] * dbar_phi[None, :]
    d_dbar_phi = (-np.conj(fpv) * B / S ** 2
                  + 2.0 * np.conj(fv) * A * B / S ** 3
                  - np.conj(fv) * C / S ** 2)                   # d(dbar phi_k)
    dpdp = (-np.conj(fv) * B / S ** 2)[:, None] * dbar_phi[None, :] \
        + phi[:, None] * d_dbar_phi[None, :]
    return KoszulFields(phi=phi, phi_dbar_phi=pdp, d_phi_dbar_phi=dpdp)


@dataclass
class CoronaSolution:
    """Grid solution, fitted polynomial representatives and diagnostics."""

    grid: np.ndarray = field(repr=False)
    g_values: np.ndarray = field(repr=False)      # (n, n_grid)
    g_polys: list = field(repr=False)
    fit_residuals: list = field(default_factory=list)
    bezout_residual_grid: float = 0.0
    bezout_residual_fitted: float = 0.0
    dbar_residuals: list = field(default_factory=list)
    dbar_inversion_residual: float = 0.0
    g_norms: list = field(default_factory=list)
    h_norm: float = 0.0
    bound_ratios: list = field(default_factory=list)
    delta: float = 0.0
    n: int = 0
    fit_degree: int = 0
    refinement_delta: float = float("nan")
    rule_sizes: tuple = (0, 0)
    # live evaluation state (not serialized)
    _problem: CoronaProblem | None = field(default=None, repr=False)
    _pair_fits: dict | None = field(default=None, repr=False)

    def eval_g(self, z) -> np.ndarray:
        """Evaluate the constructed (pre-fit) solution field at new points."""
        if self._problem is None or self._pair_fits is None:
            raise RuntimeError("solution has no live evaluator (re-run corona_solve)")
        z = np.asarray(z, dtype=complex).ravel()
        prob = self._problem
        n = self.n
        kos = koszul_fields(prob.f, prob.h, z)
        hv = poly_eval(prob.h, z)
        fv = np.stack([poly_eval(fj, z) for fj in prob.f])
        g = kos.phi * hv[None, :]
        if n > 1:
            d = _pair_differences(self._pair_fits, n, z)
            for j in range(n):
                for k in range(n):
                    if j != k:
                        g[j] += d[(j, k)] * fv[k]
        return g

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "delta": self.delta,
            "grid": [[z.real, z.imag] for z in self.grid],
            "g_values": [[[v.real, v.imag] for v in row] for row in self.g_values],
            "g_polys": [p.to_json() for p in self.g_polys],
            "fit_degree": self.fit_degree,
            "fit_residuals": self.fit_residuals,
            "bezout_residual_grid": self.bezout_residual_grid,
            "bezout_residual_fitted": self.bezout_residual_fitted,
            "dbar_residuals": self.dbar_residuals,
            "dbar_inversion_residual": self.dbar_inversion_residual,
            "g_norms": self.g_norms,
            "h_norm": self.h_norm,
            "bound_ratios": self.bound_ratios,
            "refinement_delta": self.refinement_delta,
            "rule_sizes": list(self.rule_sizes),
        }


def _pair_differences(pair_fits: dict, n: int, targets: np.ndarray) -> dict:
    """Antisymmetrized transform differences d_jk = a_jk - a_kj.

    Computed once per unordered pair and reused with a sign flip, so the
    Koszul cancellation holds to rounding by construction.
    """
    out = {}
    for j in range(n):
        for k in range(j + 1, n):
            ajk = modal.cauchy_eval(pair_fits[(j, k)], targets)
            akj = modal.cauchy_eval(pair_fits[(k, j)], targets)
            d = ajk - akj
            out[(j, k)] = d
            out[(k, j)] = -d
    return out


def _eval_grid(radius: float, n_r: int, n_t: int) -> np.ndarray:
    x, _ = np.polynomial.legendre.leggauss(n_r)
    radii = radius * np.sqrt(0.5 * (x + 1.0))
    th = 2.0 * np.pi * np.arange(n_t) / n_t
    grid = (radii[:, None] * np.exp(1j * th)[None, :]).ravel()
    return np.concatenate([[0.0 + 0.0j], grid])


def corona_solve(problem: CoronaProblem, n_r: int = 96, n_theta: int = 256,
                 N_g: int | None = None, eval_radius: float = 0.95,
                 n_eval_r: int = 20, n_eval_t: int = 48,
                 fd_step: float = 1e-3, refine_check: bool = True,
                 refine_tol: float = 1e-5, jobs: int | None = None) -> CoronaSolution:
    """Build holomorphic g_j with sum f_j g_j = h and verify the construction.

    Steps: sample the correction fields on the rule grid, transform them,
    assemble g_j on the evaluation grid, fit polynomial representatives
    (degree raised until the fit residual drops below 1e-7 or the cap 64),
    and collect residual and norm diagnostics.
    """
    f, h, mu = problem.f, problem.h, problem.mu
    n = len(f)
    grid = _eval_grid(eval_radius, n_eval_r, n_eval_t)
    rule = quadrature.disk_rule(n_r, n_theta)

    # corona condition on the sample grid
    absf2 = np.zeros(rule.nodes.shape)
    for fj in f:
        absf2 += np.abs(poly_eval(fj, rule.nodes)) ** 2
    if np.min(absf2) < problem.delta ** 2 * (1.0 - 1e-9):
        raise CoronaConditionError(
            f"delta^2 = {problem.delta ** 2:.6g} exceeds the grid minimum of |f|^2 "
            f"({np.min(absf2):.6g})")

    # probe points for dbar checks (kept off the outermost ring)
    rng = np.random.default_rng(271828)
    n_probe = 40
    probes = (0.88 * np.sqrt(rng.random(n_probe))
              * np.exp(2j * np.pi * rng.random(n_probe)))
    stencil = np.concatenate([probes + fd_step, probes - fd_step,
                              probes + 1j * fd_step, probes - 1j * fd_step])

    hv_grid = poly_eval(h, grid)
    fv_grid = np.stack([poly_eval(fj, grid) for fj in f])
    kos_grid = koszul_fields(f, h, grid)
    g = kos_grid.phi * hv_grid[None, :]

    dbar_res = [0.0] * n
    inv_res = 0.0
    refinement_delta = 0.0
    pair_fits: dict = {}
    if n > 1:
        kos_rule = koszul_fields(f, h, rule.nodes)
        h_rule = poly_eval(h, rule.nodes)
        fields = {(j, k): kos_rule.phi_dbar_phi[j, k] * h_rule
                  for j in range(n) for k in range(n) if j != k}

        def _fit(key):
            return key, modal.PolarFieldFit(rule, fields[key])

        if jobs and jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                pair_fits = dict(pool.map(_fit, fields))
        else:
            pair_fits = dict(_fit(k) for k in fields)

        targets = np.concatenate([grid, probes, stencil])
        d_all = _pair_differences(pair_fits, n, targets)
        n_grid, n_p = len(grid), len(probes)
        fv_probe = np.stack([poly_eval(fj, probes) for fj in f])
        fv_sten = np.stack([poly_eval(fj, stencil) for fj in f])
        kos_probe = koszul_fields(f, h, probes)
        kos_sten = koszul_fields(f, h, stencil)
        h_probe = poly_eval(h, probes)
        h_sten = poly_eval(h, stencil)
        g_probe = kos_probe.phi * h_probe[None, :]
        g_sten = kos_sten.phi * h_sten[None, :]
        for j in range(n):
            for k in range(n):
                if j == k:
                    continue
                g[j] += d_all[(j, k)][:n_grid] * fv_grid[k]
                g_probe[j] += d_all[(j, k)][n_grid:n_grid + n_p] * fv_probe[k]
                g_sten[j] += d_all[(j, k)][n_grid + n_p:] * fv_sten[k]

        # holomorphy: central-difference dbar of g at the probes
        for j in range(n):
            e, w_, no, so = np.split(g_sten[j], 4)
            dbar = ((e - w_) + 1j * (no - so)) / (4.0 * fd_step)
            dbar_res[j] = float(np.max(np.abs(dbar)) / max(np.max(np.abs(g[j])), 1e-300))

        # dbar-inversion: finite differences of a_jk reproduce the field
        j0, k0 = 0, 1
        a_sten = modal.cauchy_eval(pair_fits[(j0, k0)], stencil)
        e, w_, no, so = np.split(a_sten, 4)
        dbar_a = ((e - w_) + 1j * (no - so)) / (4.0 * fd_step)
        target_field = kos_probe.phi_dbar_phi[j0, k0] * h_probe
        scale = max(float(np.max(np.abs(target_field))), 1e-300)
        inv_res = float(np.max(np.abs(dbar_a - target_field)) / scale)

        if refine_check:
            fine = rule.refined()
            kos_f = koszul_fields(f, h, fine.nodes)
            h_f = poly_eval(h, fine.nodes)
            j0, k0 = 0, 1
            fit_f = modal.PolarFieldFit(fine, kos_f.phi_dbar_phi[j0, k0] * h_f)
            coarse_vals = modal.cauchy_eval(pair_fits[(j0, k0)], probes)
            fine_vals = modal.cauchy_eval(fit_f, probes)
            scale = max(float(np.max(np.abs(fine_vals))), 1e-300)
            refinement_delta = float(np.max(np.abs(fine_vals - coarse_vals)) / scale)
            if refinement_delta > refine_tol:
                raise CoronaInstabilityError(
                    f"transform changed by {refinement_delta:.3e} under refinement")

    # polynomial representatives by least squares on the grid
    base_degree = h.degree + sum(max(fj.degree, 0) for fj in f) + 16 if N_g is None else N_g
    g_polys, fit_res, degree = _fit_polynomials(grid, g, eval_radius, base_degree,
                                                auto=N_g is None)

    bez_grid = np.abs(np.einsum("jg,jg->g", fv_grid, g) - hv_grid)
    g_fit_vals = np.stack([poly_eval(p, grid) for p in g_polys])
    bez_fit = np.abs(np.einsum("jg,jg->g", fv_grid, g_fit_vals) - hv_grid)

    g_norms = [math.sqrt(spaces.dmu_norm_sq(p, mu, mode="v")) for p in g_polys]
    h_norm = math.sqrt(spaces.dmu_norm_sq(h, mu, mode="v"))
    bound = n ** 3 / problem.delta ** 4 * h_norm
    ratios = [gn / bound for gn in g_norms]

    return CoronaSolution(
        grid=grid, g_values=g, g_polys=g_polys, fit_residuals=fit_res,
        bezout_residual_grid=float(np.max(bez_grid)),
        bezout_residual_fitted=float(np.max(bez_fit)),
        dbar_residuals=dbar_res, dbar_inversion_residual=inv_res,
        g_norms=g_norms, h_norm=h_norm, bound_ratios=ratios,
        delta=problem.delta, n=n, fit_degree=degree,
        refinement_delta=refinement_delta, rule_sizes=(n_r, n_theta),
        _problem=problem, _pair_fits=pair_fits or None,
    )


def _fit_polynomials(grid, g, radius, degree, auto=True, cap=64, target=1e-7):
    scaled = grid / radius
    n = g.shape[0]
    while True:
        V = scaled[:, None] ** np.arange(degree + 1)[None, :]
        coeffs, *_ = np.linalg.lstsq(V, g.T, rcond=None)
        fit_vals = V @ coeffs
        scalefac = np.maximum(np.max(np.abs(g), axis=1), 1e-300)
        res = [float(np.max(np.abs(fit_vals[:, j] - g[j])) / scalefac[j])
               for j in range(n)]
        if not auto or max(res) < target or degree >= cap:
            break
        degree += 8
    polys = [CPoly(coeffs[:, j] / radius ** np.arange(degree + 1)) for j in range(n)]
    return polys, res, degree


@dataclass(frozen=True)
class CoronaVerification:
    bezout_residual: float
    bezout_residual_fitted: float
    dbar_residuals: list
    fit_residuals: list
    g_norms: list
    h_norm: float
    bound_ratios: list
    grid_size: int


def corona_verify(solution: CoronaSolution, problem: CoronaProblem,
                  grid=None, fd_step: float = 1e-3) -> CoronaVerification:
    """Recompute the solution diagnostics, optionally on a fresh grid.

    Thresholds are left to callers; this only reports numbers. With a live
    solution the holomorphy check re-evaluates the constructed field at
    fresh finite-difference stencils.
    """
    pts = solution.grid if grid is None else np.asarray(grid, dtype=complex).ravel()
    fv = np.stack([poly_eval(fj, pts) for fj in problem.f])
    hv = poly_eval(problem.h, pts)
    if grid is None:
        gv = solution.g_values
    else:
        gv = solution.eval_g(pts)
    bez = float(np.max(np.abs(np.einsum("jg,jg->g", fv, gv) - hv)))
    gfit = np.stack([poly_eval(p, pts) for p in solution.g_polys])
    bez_fit = float(np.max(np.abs(np.einsum("jg,jg->g", fv, gfit) - hv)))
    scale = np.maximum(np.max(np.abs(gv), axis=1), 1e-300)
    fit_res = [float(np.max(np.abs(gfit[j] - gv[j])) / scale[j])
               for j in range(len(problem.f))]

    dbar_res = list(solution.dbar_residuals)
    if solution._pair_fits is not None and len(problem.f) > 1:
        rng = np.random.default_rng(314159)
        probes = (0.85 * np.sqrt(rng.random(24))
                  * np.exp(2j * np.pi * rng.random(24)))
        stencil = np.concatenate([probes + fd_step, probes - fd_step,
                                  probes + 1j * fd_step, probes - 1j * fd_step])
        gs = solution.eval_g(stencil)
        dbar_res = []
        for j in range(len(problem.f)):
            e, w_, no, so = np.split(gs[j], 4)
            dbar = ((e - w_) + 1j * (no - so)) / (4.0 * fd_step)
            dbar_res.append(float(np.max(np.abs(dbar)) / scale[j]))

    g_norms = [math.sqrt(spaces.dmu_norm_sq(p, problem.mu, mode="v"))
               for p in solution.g_polys]
    h_norm = math.sqrt(spaces.dmu_norm_sq(problem.h, problem.mu, mode="v"))
    bound = len(problem.f) ** 3 / problem.delta ** 4 * h_norm
    ratios = [gn / bound for gn in g_norms]
    return CoronaVerification(
        bezout_residual=bez, bezout_residual_fitted=bez_fit,
        dbar_residuals=dbar_res, fit_residuals=fit_res,
        g_norms=g_norms, h_norm=h_norm, bound_ratios=ratios,
        grid_size=len(pts))
