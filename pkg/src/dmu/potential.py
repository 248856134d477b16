"""The two weights attached to a measure on the closed disk.

U combines a logarithmic Green kernel over the disk with the Poisson
kernel over the circle and is superharmonic; V is the plain Poisson-type
integral of the measure. Atoms and circle densities get closed-form
kernels; radial disk densities reduce to one-dimensional integrals;
everything else goes through quadrature.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import moments, quadrature
from .measures import MeasureSpec, total_mass

__all__ = [
    "WeightField",
    "eval_U",
    "eval_V",
    "weight_field",
    "check_v_envelope",
    "check_kernel_estimate",
    "EnvelopeReport",
    "KernelEstimateReport",
]


def _poisson_kernel(z: np.ndarray, loc: complex) -> np.ndarray:
    return (1.0 - np.abs(z) ** 2) / np.abs(1.0 - np.conj(loc) * z) ** 2


def eval_V(mu: MeasureSpec, z):
    """Poisson-type weight: integral of (1-|z|^2)/|1 - conj(zeta) z|^2 dmu(zeta).

    Finite and strictly positive on the open disk for nonzero mu.
    """
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(z_arr) >= 1.0):
        raise ValueError("V is evaluated on the open disk only")
    out = np.zeros(z_arr.shape, dtype=float)
    for loc, mass in mu.atoms:
        out += mass * _poisson_kernel(z_arr, loc)
    if mu.circle is not None:
        out += np.real(_harmonic_extension(mu.circle, z_arr))
    if mu.disk is not None:
        d = mu.disk
        if d.is_radial:
            prof = moments.v_profile(
                MeasureSpec(label="density-part", disk=d))
            out += prof(np.abs(z_arr) ** 2)
        else:
            out += _v_density_quadrature(d, z_arr)
    if np.isscalar(z) or np.asarray(z).ndim == 0:
        return float(out[0])
    return out


def _harmonic_extension(c, z: np.ndarray) -> np.ndarray:
    """Exact Poisson integral of a trigonometric-polynomial density."""
    out = np.full(z.shape, complex(c.coeff(0)))
    zp = np.ones_like(z)
    for m in range(1, c.order + 1):
        zp = zp * z
        out = out + c.coeff(m) * zp + c.coeff(-m) * np.conj(zp)
    return out


def _v_density_quadrature(d, z: np.ndarray, rule=None) -> np.ndarray:
    rule = rule or quadrature.disk_rule(64, 128)
    srcw = (rule.weights * np.asarray(d(rule.nodes), dtype=float)).ravel()
    srcn = rule.nodes.ravel()
    out = np.empty(z.size)
    flat = z.ravel()
    chunk = 2048
    for lo in range(0, flat.size, chunk):
        zz = flat[lo:lo + chunk, None]
        ker = (1.0 - np.abs(zz) ** 2) / np.abs(1.0 - np.conj(srcn)[None, :] * zz) ** 2
        out[lo:lo + chunk] = ker @ srcw
    return out.reshape(z.shape)


def eval_U(mu: MeasureSpec, z, rule=None):
    """Superharmonic weight; +inf at interior atom locations.

    Interior atoms use the closed-form log kernel, circle parts the exact
    Poisson integral, radial densities the ring potential, and non-radial
    densities the modal log-kernel quadrature.
    """
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(z_arr) >= 1.0):
        raise ValueError("U is evaluated on the open disk only")
    out = np.zeros(z_arr.shape, dtype=float)
    for loc, mass in mu.boundary_atoms:
        out += mass * _poisson_kernel(z_arr, loc / abs(loc))
    for loc, mass in mu.interior_atoms:
        num = np.abs(1.0 - np.conj(loc) * z_arr) ** 2
        den = np.abs(z_arr - loc) ** 2
        with np.errstate(divide="ignore"):
            vals = np.where(den > 0.0, np.log(num / np.where(den > 0, den, 1.0)), np.inf)
        out += mass * vals / (1.0 - abs(loc) ** 2)
    if mu.circle is not None:
        out += np.real(_harmonic_extension(mu.circle, z_arr))
    if mu.disk is not None:
        d = mu.disk
        if d.is_radial:
            prof = moments.u_profile(MeasureSpec(label="density-part", disk=d))
            out += prof(np.abs(z_arr) ** 2)
        else:
            rule = rule or quadrature.disk_rule(96, 192)
            dens = lambda w: np.asarray(d(w), dtype=float) / (1.0 - np.abs(w) ** 2)
            vals = quadrature.log_kernel_integral(dens, z_arr.ravel(), rule)
            out += np.asarray(vals).reshape(z_arr.shape)
    if np.isscalar(z) or np.asarray(z).ndim == 0:
        return float(out[0])
    return out


@dataclass(frozen=True)
class WeightField:
    """Both weights evaluated on a grid of interior points."""

    label: str
    points: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)

    def rows(self):
        for z, u, v in zip(self.points, self.u, self.v):
            yield float(z.real), float(z.imag), float(u), float(v)


def weight_field(mu: MeasureSpec, points) -> WeightField:
    pts = np.asarray(points, dtype=complex).ravel()
    return WeightField(label=mu.label, points=pts,
                       u=np.atleast_1d(eval_U(mu, pts)),
                       v=np.atleast_1d(eval_V(mu, pts)))


@dataclass(frozen=True)
class EnvelopeReport:
    """Per-sample check of the two-sided Poisson envelope.

    lower  (1-|z|^2) mass / 4
    upper  4 mass / (1-|z|^2)

    The upper constant is 4, not 2: with |1 - conj(zeta) z| >= 1-|z| and
    (1-|z|)^2 >= (1-|z|^2)^2/4 the sharp uniform bound has constant 4,
    and a unit mass at zeta=1 evaluated at z=0.7 already exceeds the
    constant-2 variant (V = 5.66... > 3.92...). See also the regression
    test pinning this counterexample.
    """

    label: str
    points: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    lower: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)
    slack: float
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def check_v_envelope(mu: MeasureSpec, points, slack: float = 1e-9) -> EnvelopeReport:
    pts = np.asarray(points, dtype=complex).ravel()
    mass = total_mass(mu)
    v = np.atleast_1d(eval_V(mu, pts))
    x = np.abs(pts) ** 2
    lower = (1.0 - x) * mass / 4.0
    upper = 4.0 * mass / (1.0 - x)
    bad = []
    for i in range(len(pts)):
        if v[i] < lower[i] - slack or v[i] > upper[i] + slack:
            bad.append((complex(pts[i]), float(v[i]), float(lower[i]), float(upper[i])))
    return EnvelopeReport(label=mu.label, points=pts, values=v,
                          lower=lower, upper=upper, slack=slack, violations=bad)


@dataclass(frozen=True)
class KernelEstimateReport:
    s: float
    r: float
    t: float
    samples: list
    ratios: np.ndarray = field(repr=False)
    max_ratio: float
    refinement_change: float


def _angular_graded(critical: list[float], panels: int, pts: int):
    """Periodic angular nodes/weights graded toward the critical angles.

    The kernel factors peak at the arguments of lambda and zeta with
    widths shrinking like 1-r, so the angular grid must resolve all
    dyadic scales around those directions; between them the integrand
    is analytic and plain panels suffice.
    """
    if not critical:
        th = 2.0 * np.pi * np.arange(64) / 64
        return th, np.full(64, 2.0 * np.pi / 64)
    crit = np.sort(np.mod(np.asarray(critical, dtype=float), 2.0 * np.pi))
    crit = crit[np.concatenate([[True], np.diff(crit) > 1e-13])]
    nodes, weights = [], []
    for i in range(len(crit)):
        a = crit[i]
        b = crit[(i + 1) % len(crit)] if i + 1 < len(crit) else crit[0] + 2.0 * np.pi
        mid = 0.5 * (a + b)
        x1, w1 = quadrature.gauss_panels(a, mid, panels=panels, pts=pts, grade="left")
        x2, w2 = quadrature.gauss_panels(mid, b, panels=panels, pts=pts, grade="right")
        nodes.extend([x1, x2])
        weights.extend([w1, w2])
    return np.concatenate(nodes), np.concatenate(weights)


def _kernel_lhs(s: float, r: float, t: float, lam: complex, zeta: complex,
                panels: int, pts: int) -> float:
    x, wx = quadrature.gauss_panels(0.0, 1.0, panels=panels, pts=pts, grade="right")
    critical = []
    if abs(lam) > 1e-13:
        critical.append(float(np.angle(lam)))
    if abs(zeta) > 1e-13:
        critical.append(float(np.angle(zeta)))
    th, wth = _angular_graded(critical, panels, pts)
    z = np.sqrt(x)[:, None] * np.exp(1j * th)[None, :]
    vals = (1.0 - x[:, None]) ** s / (
        np.abs(1.0 - lam * np.conj(z)) ** r * np.abs(1.0 - np.conj(zeta) * z) ** t)
    return float(wx @ vals @ wth / (2.0 * np.pi))


def check_kernel_estimate(s: float, r: float, t: float, samples,
                          panels: int = 30, pts: int = 12) -> KernelEstimateReport:
    """Ratio statistics for the weighted kernel inequality

        int (1-|z|^2)^s / (|1 - lambda conj(z)|^r |1 - conj(zeta) z|^t) dA
            <= C * (1-|lambda|^2)^-(r-s-2) |1 - conj(zeta) lambda|^-t

    valid for t < s+2 < r. The left side is integrated on a tensor grid
    graded radially toward the boundary and angularly toward the peak
    directions; the report carries the max observed ratio and its change
    under one refinement.
    """
    if not (s > -1 and r >= 0 and t >= 0 and r + t - s > 2):
        raise ValueError("parameters violate the integrability constraints")
    if not (t < s + 2 < r):
        raise ValueError("need t < s + 2 < r")
    samples = [(complex(l), complex(zt)) for l, zt in samples]
    for lam, zeta in samples:
        if abs(lam) >= 1.0 or abs(zeta) > 1.0 + 1e-12:
            raise ValueError("need lambda in the open disk, zeta in the closed disk")

    def rhs(lam, zeta):
        return (1.0 - abs(lam) ** 2) ** (-(r - s - 2.0)) * abs(1.0 - np.conj(zeta) * lam) ** (-t)

    ratios = np.array([_kernel_lhs(s, r, t, lam, zeta, panels, pts) / rhs(lam, zeta)
                       for lam, zeta in samples])
    ratios_f = np.array([_kernel_lhs(s, r, t, lam, zeta, panels + 6, pts + 4)
                         / rhs(lam, zeta) for lam, zeta in samples])
    if not np.all(np.isfinite(ratios)):
        raise ValueError("kernel-estimate ratio is not finite")
    change = float(np.max(np.abs(ratios_f - ratios) / np.abs(ratios_f)))
    return KernelEstimateReport(s=s, r=r, t=t, samples=samples, ratios=ratios_f,
                                max_ratio=float(np.max(ratios_f)),
                                refinement_change=change)
