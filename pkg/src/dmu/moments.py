"""Exact and near-exact moment engines for the disk weights.

Everything downstream (Gram matrices, operator-norm certificates, norm
modes) reduces to monomial moments against the two weights. Against the
Poisson-type weight these moments telescope into closed forms for atoms
and circle densities, and into one-dimensional integrals for radial
densities; only genuinely non-radial custom densities fall back to 2-D
quadrature. Keeping these routes exact removes quadrature error from the
eigenvalue certificates, whose tolerances sit near double precision.
"""
from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.special import gammaln, hyp2f1

from .measures import DiskDensity, MeasureSpec
from . import quadrature

__all__ = [
    "area_moment",
    "area_weighted_moment",
    "poisson_series_values",
    "atom_poisson_moments",
    "poisson_moment_matrix",
    "log_moment_matrix",
    "emu_moment_matrix",
    "v_profile",
    "u_profile",
    "radial_density_moments",
]


def area_moment(p: int, q: int) -> float:
    """Integral of z^p conj(z)^q over the disk: diagonal 1/(p+1)."""
    return 1.0 / (p + 1) if p == q else 0.0


def area_weighted_moment(p: int, q: int, j: int) -> float:
    """Integral of z^p conj(z)^q (1-|z|^2)^j dA = Beta(p+1, j+1) on the diagonal."""
    if p != q:
        return 0.0
    return float(np.exp(gammaln(p + 1) + gammaln(j + 1) - gammaln(p + j + 2)))


def poisson_series_values(x: float, e_max: int) -> np.ndarray:
    """B_E(x) = sum_{t>=0} x^t / ((E+t+1)(E+t+2)) for E = 0..e_max.

    These are the radial factors of the Poisson-kernel monomial moments
    for a point mass at radius sqrt(x). Evaluated by a stable downward
    recurrence B_E = 1/((E+1)(E+2)) + x B_{E+1} away from x = 1 and by a
    cancellation-safe log form near x = 1.
    """
    if x < 0 or x > 1:
        raise ValueError("need 0 <= x <= 1")
    E = np.arange(e_max + 1)
    if x == 0.0:
        return 1.0 / ((E + 1.0) * (E + 2.0))
    if x <= 0.99:
        extra = int(np.ceil(-40.0 / np.log(x))) if x > 0 else 0
        top = e_max + extra
        acc = 0.0
        out = np.empty(e_max + 1)
        for e in range(top, e_max, -1):
            acc = 1.0 / ((e + 1.0) * (e + 2.0)) + x * acc
        for e in range(e_max, -1, -1):
            acc = 1.0 / ((e + 1.0) * (e + 2.0)) + x * acc
            out[e] = acc
        return out
    # near x = 1: B_E = x^{-(E+2)} [ x + (1-x) log(1-x) - sum_{j=2}^{E+1} x^j/(j(j-1)) ]
    lead = x + (1.0 - x) * (np.log1p(-x) if x < 1.0 else 0.0)
    j = np.arange(2, e_max + 2)
    partial = np.concatenate([[0.0], np.cumsum(x ** j / (j * (j - 1.0)))])
    return (lead - partial) / x ** (E + 2.0)


def atom_poisson_moments(loc: complex, A: int, B: int) -> np.ndarray:
    """M[a][b] = integral of z^a conj(z)^b * (1-|z|^2)/|1 - conj(loc) z|^2 dA(z).

    For |loc| = 1 the double series telescopes to loc^(a-b)/(max(a,b)+1);
    inside the disk the radial factor is B_{max(a,b)}(|loc|^2).
    """
    a = np.arange(A + 1)[:, None]
    b = np.arange(B + 1)[None, :]
    loc = complex(loc)
    x = abs(loc) ** 2
    if abs(abs(loc) - 1.0) <= 1e-12:
        zeta = loc / abs(loc)
        phase = zeta ** (a - b)
        return phase / (np.maximum(a, b) + 1.0)
    radial = poisson_series_values(x, max(A, B))
    E = np.maximum(a, b)
    d = a - b
    # loc^(a-b) for a >= b, conj(loc)^(b-a) for b > a
    phase = np.where(d >= 0, loc ** np.maximum(d, 0), np.conj(loc) ** np.maximum(-d, 0))
    return phase * radial[E]


def log_moment_matrix(omega: complex, A: int, B: int) -> np.ndarray:
    """L[a][b] = integral of z^a conj(z)^b log|(1 - conj(omega) z)/(z - omega)|^2 dA(z).

    Closed form for |omega| < 1, obtained from the two-region expansion
    of both logarithms; the diagonal collapses to (1 - x^(a+1))/(a+1)^2
    for the singular part (x = |omega|^2).
    """
    if abs(omega) >= 1.0:
        raise ValueError("log moments need |omega| < 1")
    omega = complex(omega)
    x = abs(omega) ** 2
    out = np.zeros((A + 1, B + 1), dtype=complex)
    for a in range(A + 1):
        for b in range(B + 1):
            if a == b:
                smooth = 0.0
                singular = (x ** (a + 1) - 1.0) / (a + 1) ** 2
            elif a > b:
                d = a - b
                smooth = -(omega ** d) / (d * (a + 1.0))
                singular = -(omega ** d) * (x ** (b + 1)) / (d * (a + 1.0)) \
                    - (omega ** d) * (1.0 - x ** (b + 1)) / (d * (b + 1.0))
            else:
                d = b - a
                smooth = -(np.conj(omega) ** d) / (d * (b + 1.0))
                singular = -(np.conj(omega) ** d) * (x ** (a + 1)) / (d * (a + 1.0)) \
                    - (np.conj(omega) ** d) * (1.0 - x ** (a + 1)) / (d * (a + 1.0))
            out[a, b] = smooth - singular
    return out


def radial_density_moments(d: DiskDensity, count: int) -> np.ndarray:
    """m[t] = integral of |w|^(2t) * density over the disk, t = 0..count-1."""
    if d.kind == "hardy":
        t = np.arange(count, dtype=float)
        return 1.0 / ((t + 1.0) * (t + 2.0))
    if d.kind == "alpha":
        a = d.alpha
        t = np.arange(count, dtype=float)
        b1 = np.exp(gammaln(t + 1.0) + gammaln(2.0 - a) - gammaln(t + 3.0 - a))
        b2 = np.exp(gammaln(t + 2.0) + gammaln(1.0 - a) - gammaln(t + 3.0 - a))
        return (1.0 - a) * (b1 + a * b2)
    if not d.is_radial:
        raise ValueError("radial moments need a radial density")
    x, w = quadrature.gauss_panels(0.0, 1.0, panels=40, pts=16, grade="right")
    prof = d.radial_profile(x)
    return np.array([float(np.sum(w * x ** t * prof)) for t in range(count)])


# --- radial weight profiles -------------------------------------------------

def _hardy_v_profile(x: np.ndarray) -> np.ndarray:
    """(1-x) sum_s x^s/((s+1)(s+2)); log closed form away from x = 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < 0.4
    xs = x[small]
    acc = np.zeros_like(xs)
    for s in range(60, -1, -1):
        acc = acc * xs + 1.0 / ((s + 1.0) * (s + 2.0))
    out[small] = (1.0 - xs) * acc
    xl = x[~small]
    out[~small] = (1.0 - xl) * (xl + (1.0 - xl) * np.log1p(-xl)) / xl ** 2
    return out


def _alpha_v_profile(x: np.ndarray, a: float) -> np.ndarray:
    # hyp2f1(2,1;3-a;x) loses the (1-x)^(-a) branch for x within ~1e-13 of 1,
    # so the extreme tail is integrated directly instead.
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    near = x > 0.999
    xf = x[~near]
    h1 = hyp2f1(1.0, 1.0, 3.0 - a, xf)
    h2 = hyp2f1(2.0, 1.0, 3.0 - a, xf)
    out[~near] = (1.0 - xf) * ((1.0 - a) * h1 + a * h2) / (2.0 - a)
    if np.any(near):
        d = DiskDensity(kind="alpha", alpha=a)
        out[near] = _custom_radial_v_profile(d, x[near])
    return out


def _custom_radial_v_profile(d: DiskDensity, x: np.ndarray) -> np.ndarray:
    """(1-x) * integral of profile(y)/(1-x y) dy for a general radial density."""
    y, w = quadrature.gauss_panels(0.0, 1.0, panels=40, pts=16, grade="right")
    prof = d.radial_profile(y)
    x = np.asarray(x, dtype=float)
    return (1.0 - x) * ((w * prof)[None, :] / (1.0 - np.outer(x, y))).sum(axis=1)


def v_profile(mu: MeasureSpec) -> Callable:
    """Radial profile x = |z|^2 -> V_mu(z) for rotation-invariant measures."""
    if not mu.is_radial:
        raise ValueError("v_profile needs a radial measure")
    center_mass = sum(m for loc, m in mu.interior_atoms)
    c0 = mu.circle.coeff(0).real if mu.circle is not None else 0.0
    d = mu.disk

    def profile(x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, c0)  # Poisson mean of the uniform circle part
        out = out + center_mass * (1.0 - x)
        if d is not None:
            if d.kind == "hardy":
                out = out + _hardy_v_profile(x)
            elif d.kind == "alpha":
                out = out + _alpha_v_profile(x, d.alpha)
            else:
                out = out + _custom_radial_v_profile(d, x)
        return out

    return profile


def u_profile(mu: MeasureSpec) -> Callable:
    """Radial profile x = |z|^2 -> U_mu(z) for rotation-invariant measures.

    For a radial disk density the ring potential gives
      U(x) = log(1/x) * int_0^x g + int_x^1 log(1/y) g(y) dy,
    with g(y) = profile(y)/(1-y).
    """
    if not mu.is_radial:
        raise ValueError("u_profile needs a radial measure")
    center_mass = sum(m for loc, m in mu.interior_atoms)
    c0 = mu.circle.coeff(0).real if mu.circle is not None else 0.0
    d = mu.disk

    def profile(x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, c0)
        if center_mass > 0:
            with np.errstate(divide="ignore"):
                out = out + center_mass * np.where(x > 0, -np.log(x), np.inf)
        if d is not None:
            if d.kind == "hardy":
                out = out + (1.0 - x)
            else:
                vals = np.empty_like(x)
                for i, xi in np.ndenumerate(x):
                    yin, win = quadrature.gauss_panels(0.0, float(xi), panels=24,
                                                       pts=12, grade="right")
                    yout, wout = quadrature.gauss_panels(float(xi), 1.0, panels=28,
                                                         pts=12, grade="right")
                    gin = d.radial_profile(yin) / (1.0 - yin)
                    gout = d.radial_profile(yout) / (1.0 - yout)
                    inner = float(np.sum(win * gin))
                    outer = float(np.sum(wout * (-np.log(yout)) * gout))
                    vals[i] = (-np.log(xi) * inner if xi > 0 else 0.0) + outer
                out = out + vals
        return out

    return profile


# --- moment matrices --------------------------------------------------------

def poisson_moment_matrix(mu: MeasureSpec, A: int, B: int | None = None,
                          rule=None) -> np.ndarray:
    """M[a][b] = integral of z^a conj(z)^b V_mu(z) dA(z), 0 <= a <= A, 0 <= b <= B."""
    if B is None:
        B = A
    M = np.zeros((A + 1, B + 1), dtype=complex)
    for loc, mass in mu.atoms:
        M += mass * atom_poisson_moments(loc, A, B)
    if mu.circle is not None:
        a = np.arange(A + 1)[:, None]
        b = np.arange(B + 1)[None, :]
        coeffs = np.array([[mu.circle.coeff(int(bb - aa)) for bb in range(B + 1)]
                           for aa in range(A + 1)])
        M += coeffs / (np.maximum(a, b) + 1.0)
    if mu.disk is not None:
        d = mu.disk
        if d.is_radial:
            x, w = quadrature.gauss_panels(0.0, 1.0, panels=40, pts=16, grade="right")
            prof = _hardy_v_profile(x) if d.kind == "hardy" else (
                _alpha_v_profile(x, d.alpha) if d.kind == "alpha"
                else _custom_radial_v_profile(d, x))
            n = min(A, B) + 1
            powers = x[None, :] ** np.arange(n)[:, None]
            diag = powers @ (w * prof)
            M[np.arange(n), np.arange(n)] += diag
        else:
            M += _poisson_moments_quadrature(d, A, B, rule)
    return M


def _poisson_moments_quadrature(d: DiskDensity, A: int, B: int, rule=None) -> np.ndarray:
    """2-D fallback for non-radial densities: pointwise V by a nested rule."""
    rule = rule or quadrature.graded_disk_rule(n_theta=256)
    src = quadrature.disk_rule(64, 128)
    z = rule.nodes.ravel()
    wts = rule.weights.ravel()
    vcustom = np.zeros(len(z))
    srcw = (src.weights * np.asarray(d(src.nodes), dtype=float)).ravel()
    srcn = src.nodes.ravel()
    chunk = 2048
    for lo in range(0, len(z), chunk):
        zz = z[lo:lo + chunk, None]
        ker = (1.0 - np.abs(zz) ** 2) / np.abs(1.0 - np.conj(srcn)[None, :] * zz) ** 2
        vcustom[lo:lo + chunk] = ker @ srcw
    M = np.zeros((A + 1, B + 1), dtype=complex)
    za = z[None, :] ** np.arange(A + 1)[:, None]
    zb = np.conj(z)[None, :] ** np.arange(B + 1)[:, None]
    weighted = wts * vcustom
    M = np.einsum("an,bn,n->ab", za, zb, weighted)
    return M


def emu_moment_matrix(mu: MeasureSpec, A: int, B: int | None = None,
                      rule=None) -> np.ndarray:
    """E[a][b] = integral of z^a conj(z)^b (1-|z|^2)^2 / V_mu(z) dA(z).

    Radial measures reduce to diagonal 1-D integrals; a single boundary
    atom has polynomial integrand and exact tridiagonal moments; anything
    else uses a boundary-graded rule with the pointwise weight.
    """
    if B is None:
        B = A
    if mu.is_zero:
        raise ValueError("the Cauchy-dual weight needs a nonzero measure")
    if mu.is_radial:
        prof = v_profile(mu)
        x, w = quadrature.gauss_panels(0.0, 1.0, panels=40, pts=16, grade="right")
        vals = w * (1.0 - x) ** 2 / prof(x)
        E = np.zeros((A + 1, B + 1), dtype=complex)
        n = min(A, B) + 1
        powers = x[None, :] ** np.arange(n)[:, None]
        E[np.arange(n), np.arange(n)] = powers @ vals
        return E
    if (len(mu.atoms) == 1 and mu.circle is None and mu.disk is None
            and abs(abs(mu.atoms[0][0]) - 1.0) <= 1e-12):
        zeta, mass = mu.atoms[0]
        zeta = zeta / abs(zeta)
        E = np.zeros((A + 1, B + 1), dtype=complex)
        for a in range(A + 1):
            for b in range(B + 1):
                if a == b:
                    E[a, b] = 1.0 / ((a + 1.0) * (a + 2.0)) + 1.0 / ((a + 2.0) * (a + 3.0))
                elif b == a + 1:
                    E[a, b] = -np.conj(zeta) / ((b + 1.0) * (b + 2.0))
                elif a == b + 1:
                    E[a, b] = -zeta / ((a + 1.0) * (a + 2.0))
        return E / mass
    from . import potential

    rule = rule or quadrature.graded_disk_rule(n_theta=512)
    z = rule.nodes.ravel()
    wts = rule.weights.ravel()
    v = potential.eval_V(mu, z)
    weighted = wts * (1.0 - np.abs(z) ** 2) ** 2 / v
    za = z[None, :] ** np.arange(A + 1)[:, None]
    zb = np.conj(z)[None, :] ** np.arange(B + 1)[:, None]
    return np.einsum("an,bn,n->ab", za, zb, weighted)
