"""Norms, inner products, Gram matrices and Cauchy duality.

The default inner product on D(mu) is the Poisson-weight form

    <f, g> = <f, g>_{H2} + integral of f' conj(g') V_mu dA,

an equivalent norm to the superharmonic-weight form, which is kept for
cross-validation together with the measure form (local Dirichlet
integrals against mu). The Cauchy dual E(mu) is the Bergman-type space
with weight (1-|z|^2)^2 / V_mu.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import moments, quadrature
from .measures import MeasureSpec
from .poly import (CPoly, TrigPoly, difference_quotient, h2_norm_sq,
                   poly_derivative, poly_eval)

__all__ = [
    "GramMatrix",
    "KernelApprox",
    "gram_matrix",
    "kernel_eval",
    "local_dirichlet",
    "local_dirichlet_field",
    "dmu_norm_sq",
    "dmu_seminorm_sq",
    "emu_norm_sq",
    "cauchy_dual_transform",
    "dual_transform_taylor",
    "duality_pairing_check",
    "hd_norm_sq",
    "green_check",
]

SPACES = ("h2", "dmu", "emu", "emu_weighted")

_DUAL_MARGIN = 40


@dataclass(frozen=True)
class GramMatrix:
    """Hermitian matrix of monomial inner products up to a degree."""

    space: str
    measure_label: str
    degree: int
    matrix: np.ndarray = field(repr=False)
    herm_error: float = 0.0
    min_eig: float = 0.0

    def inner(self, f: CPoly, g: CPoly) -> complex:
        a = np.zeros(self.degree + 1, dtype=complex)
        b = np.zeros(self.degree + 1, dtype=complex)
        if f.degree > self.degree or g.degree > self.degree:
            raise ValueError("polynomial degree exceeds the Gram degree")
        a[: len(f.coeffs)] = f.coeffs
        b[: len(g.coeffs)] = g.coeffs
        return complex(a @ self.matrix @ np.conj(b))


def gram_matrix(space: str, mu: MeasureSpec, N: int, rule=None) -> GramMatrix:
    """Gram of 1, z, ..., z^N in the requested space.

    "emu" carries the Cauchy-dual norm (||U f|| = ||f||_{D(mu)}), whose
    monomial Gram is the leading corner of the inverse D(mu) Gram; the
    corner is computed from a section enlarged by a fixed margin, which
    is where the dual-basis expansion is truncated. The shift-contraction
    and Pick statements certified downstream hold in this norm. The
    equivalent explicit weighted-Bergman norm is space "emu_weighted".
    """
    if space not in SPACES:
        raise ValueError(f"unknown space {space!r}")
    if N < 0:
        raise ValueError("need N >= 0")
    if space == "h2":
        G = np.eye(N + 1, dtype=complex)
    elif space == "dmu":
        G = np.eye(N + 1, dtype=complex)
        if N >= 1:
            M = moments.poisson_moment_matrix(mu, N - 1, N - 1, rule=rule)
            jk = np.outer(np.arange(1, N + 1), np.arange(1, N + 1))
            G[1:, 1:] += jk * M
    elif space == "emu":
        big = gram_matrix("dmu", mu, N + _DUAL_MARGIN, rule=rule).matrix
        G = np.linalg.inv(big)[: N + 1, : N + 1]
    else:
        G = np.zeros((N + 1, N + 1), dtype=complex)
        G[0, 0] = 1.0
        if N >= 1:
            E = moments.emu_moment_matrix(mu, N - 1, N - 1, rule=rule)
            jk = np.outer(np.arange(1, N + 1), np.arange(1, N + 1))
            G[1:, 1:] += jk * E
    herm = float(np.max(np.abs(G - G.conj().T))) if G.size else 0.0
    if herm > 1e-10:
        raise ValueError(f"Gram Hermiticity deviation {herm:.2e} exceeds 1e-10 "
                         "(under-resolved quadrature)")
    G = 0.5 * (G + G.conj().T)
    min_eig = float(np.min(np.linalg.eigvalsh(G)))
    return GramMatrix(space=space, measure_label=mu.label, degree=N,
                      matrix=G, herm_error=herm, min_eig=min_eig)


@dataclass(frozen=True)
class KernelApprox:
    """Degree-truncated reproducing kernel via the inverse Gram."""

    gram: GramMatrix

    def __call__(self, z, w) -> complex:
        return kernel_point(self.gram, z, w)

    def matrix(self, points) -> np.ndarray:
        """Entries K(w_j, w_i) for points w_1..w_n (Hermitian, PSD)."""
        pts = np.asarray(points, dtype=complex).ravel()
        V = pts[:, None] ** np.arange(self.gram.degree + 1)[None, :]
        Ginv = np.linalg.inv(self.gram.matrix)
        return V.conj() @ Ginv.conj().T @ V.T  # entry (i, j) = K(w_j, w_i)


def kernel_point(gram: GramMatrix, z, w) -> complex:
    if gram.min_eig <= 0:
        raise ValueError("singular Gram matrix")
    n = gram.degree + 1
    vz = np.asarray(z, dtype=complex) ** np.arange(n)
    vw = np.asarray(w, dtype=complex) ** np.arange(n)
    Ginv = np.linalg.inv(gram.matrix)
    return complex(vz @ Ginv.conj() @ np.conj(vw))


def kernel_eval(space: str, mu: MeasureSpec, N: int, z, w, rule=None) -> complex:
    return kernel_point(gram_matrix(space, mu, N, rule=rule), z, w)


# --- local Dirichlet integrals ----------------------------------------------

def local_dirichlet(f: CPoly, lam: complex, method: str = "boundary",
                    rule=None) -> float:
    """Local Dirichlet integral D_lam(f) for |lam| <= 1.

    boundary: exact coefficient arithmetic on the difference quotient.
    area: quadrature of the log-kernel form for interior lam; exact
    Poisson moments for boundary lam, where uniform-angle rules cannot
    resolve the kernel peak.
    """
    lam = complex(lam)
    if abs(lam) > 1.0 + 1e-12:
        raise ValueError("need |lam| <= 1")
    if method == "boundary":
        return h2_norm_sq(difference_quotient(f, lam))
    if method != "area":
        raise ValueError(f"unknown method {method!r}")
    fp = poly_derivative(f)
    if fp.degree < 0:
        return 0.0
    if abs(abs(lam) - 1.0) <= 1e-12:
        M = moments.atom_poisson_moments(lam / abs(lam), fp.degree, fp.degree)
        return float(np.real(np.einsum("a,ab,b->", fp.coeffs, M, np.conj(fp.coeffs))))
    rule = rule or quadrature.disk_rule(96, 192)
    val = quadrature.log_kernel_integral(
        lambda w: np.abs(poly_eval(fp, w)) ** 2, lam, rule)
    return float(val) / (1.0 - abs(lam) ** 2)


def local_dirichlet_field(f: CPoly, zeta) -> np.ndarray:
    """D_zeta(f) at an array of points, by the synthetic-division recurrence."""
    zeta = np.asarray(zeta, dtype=complex)
    d = f.degree
    out = np.zeros(zeta.shape, dtype=float)
    if d <= 0:
        return out
    b = np.full(zeta.shape, f.coeffs[d], dtype=complex)
    out += np.abs(b) ** 2
    for i in range(d - 2, -1, -1):
        b = f.coeffs[i + 1] + zeta * b
        out += np.abs(b) ** 2
    return out


# --- D(mu) norms --------------------------------------------------------------

def dmu_seminorm_sq(f: CPoly, mu: MeasureSpec, mode: str = "v", rule=None) -> float:
    """The energy part of the D(mu) norm in the requested mode."""
    fp = poly_derivative(f)
    if fp.degree < 0:
        return 0.0
    c = fp.coeffs
    d = fp.degree
    if mode == "v":
        M = moments.poisson_moment_matrix(mu, d, d, rule=rule)
        return float(np.real(np.einsum("a,ab,b->", c, M, np.conj(c))))
    if mode == "u":
        total = 0.0
        for loc, mass in mu.boundary_atoms:
            M = moments.atom_poisson_moments(loc / abs(loc), d, d)
            total += mass * float(np.real(np.einsum("a,ab,b->", c, M, np.conj(c))))
        for loc, mass in mu.interior_atoms:
            L = moments.log_moment_matrix(loc, d, d)
            total += mass / (1.0 - abs(loc) ** 2) * float(
                np.real(np.einsum("a,ab,b->", c, L, np.conj(c))))
        if mu.circle is not None:
            circ = MeasureSpec(label="circle-part", circle=mu.circle)
            M = moments.poisson_moment_matrix(circ, d, d)
            total += float(np.real(np.einsum("a,ab,b->", c, M, np.conj(c))))
        if mu.disk is not None:
            if mu.disk.is_radial:
                m_rad = moments.radial_density_moments(mu.disk, d + 1)
                cums = np.cumsum(m_rad)
                a = np.arange(d + 1)
                total += float(np.sum(np.abs(c) ** 2 * cums / (a + 1.0) ** 2))
            else:
                rule2 = rule or quadrature.disk_rule(96, 192)
                from .potential import eval_U

                dens_mu = MeasureSpec(label="disk-part", disk=mu.disk)
                u_vals = eval_U(dens_mu, rule2.nodes.ravel()).reshape(rule2.nodes.shape)
                vals = np.abs(poly_eval(fp, rule2.nodes)) ** 2 * u_vals
                total += float(np.real(np.sum(vals * rule2.weights)))
        return total
    if mode == "measure":
        total = 0.0
        for loc, mass in mu.atoms:
            total += mass * h2_norm_sq(difference_quotient(f, loc))
        if mu.circle is not None:
            n = max(8, 2 * f.degree + 2 * mu.circle.order + 1)
            cr = quadrature.circle_rule(n)
            dvals = local_dirichlet_field(f, cr.nodes)
            cvals = np.real(mu.circle(cr.nodes))
            total += float(np.sum(cr.weights * dvals * cvals))
        if mu.disk is not None:
            if mu.disk.is_radial:
                x, w = quadrature.gauss_panels(0.0, 1.0, panels=40, pts=16,
                                               grade="right")
                n_t = max(8, 4 * f.degree + 4)
                th = 2.0 * np.pi * np.arange(n_t) / n_t
                zeta = np.sqrt(x)[:, None] * np.exp(1j * th)[None, :]
                dvals = local_dirichlet_field(f, zeta).mean(axis=1)
                total += float(np.sum(w * mu.disk.radial_profile(x) * dvals))
            else:
                rule2 = rule or quadrature.disk_rule(96, 192)
                dvals = local_dirichlet_field(f, rule2.nodes)
                dens = np.asarray(mu.disk(rule2.nodes), dtype=float)
                total += float(np.sum(rule2.weights * dvals * dens))
        return total
    raise ValueError(f"unknown norm mode {mode!r}")


def dmu_norm_sq(f: CPoly, mu: MeasureSpec, mode: str = "v", rule=None) -> float:
    """Full D(mu) norm squared of a polynomial in mode "u", "v" or "measure"."""
    return h2_norm_sq(f) + dmu_seminorm_sq(f, mu, mode=mode, rule=rule)


def emu_norm_sq(f: CPoly, mu: MeasureSpec, rule=None) -> float:
    """Cauchy-dual norm: |f(0)|^2 + integral of |f'|^2 (1-|z|^2)^2 / V_mu dA."""
    if mu.is_zero:
        raise ValueError("E(mu) needs a nonzero measure")
    fp = poly_derivative(f)
    head = abs(poly_eval(f, 0.0)) ** 2 if f.degree >= 0 else 0.0
    if fp.degree < 0:
        return float(head)
    E = moments.emu_moment_matrix(mu, fp.degree, fp.degree, rule=rule)
    return float(head + np.real(np.einsum("a,ab,b->", fp.coeffs, E, np.conj(fp.coeffs))))


# --- Cauchy duality -----------------------------------------------------------

def cauchy_dual_transform(f: CPoly, mu: MeasureSpec, lam: complex,
                          method: str = "exact", rule=None) -> complex:
    """Value at lam of the dual transform

        (Uf)(lam) = f(lam) + lam * integral of f'(z) (1 - lam conj(z))^-2 V_mu(z) dA(z),

    the pairing of f against the Szego kernel in the Poisson-weight inner
    product. The exact method expands the kernel into Poisson moments
    (geometric tail bound); the quadrature method is the independent
    cross-check route.
    """
    lam = complex(lam)
    if abs(lam) >= 1.0:
        raise ValueError("need |lam| < 1")
    fp = poly_derivative(f)
    base = poly_eval(f, lam) if f.degree >= 0 else 0.0
    if fp.degree < 0:
        return complex(base)
    if method == "quadrature":
        from .potential import eval_V

        rule = rule or quadrature.disk_rule(96, 192)
        z = rule.nodes.ravel()
        w = rule.weights.ravel()
        v = eval_V(mu, z)
        vals = poly_eval(fp, z) / (1.0 - lam * np.conj(z)) ** 2 * v
        return complex(base + lam * np.sum(w * vals))
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    s = abs(lam)
    if s == 0.0:
        A = fp.degree
    else:
        A = int(np.ceil((-16.0 * np.log(10.0) + np.log1p(-s)) / np.log(s))) if s > 0.3 \
            else 40
        A = max(A, fp.degree + 1)
    M = moments.poisson_moment_matrix(mu, fp.degree, A)
    a = np.arange(A + 1, dtype=float)
    coeff = fp.coeffs @ M  # c_a = sum_c f'_c M[c][a]
    tail = np.sum((a + 1.0) * lam ** a * coeff)
    return complex(base + lam * tail)


def dual_transform_taylor(f: CPoly, mu: MeasureSpec, degree: int,
                          radius: float = 0.4, method: str = "quadrature",
                          rule=None) -> np.ndarray:
    """First Taylor coefficients of the dual transform at 0, by sampling
    on an interior circle and discrete Fourier inversion."""
    n = max(4 * (degree + 1), 32)
    zs = radius * np.exp(2j * np.pi * np.arange(n) / n)
    vals = np.array([cauchy_dual_transform(f, mu, z, method=method, rule=rule)
                     for z in zs])
    coeffs = np.fft.fft(vals) / n
    return coeffs[: degree + 1] / radius ** np.arange(degree + 1)


def duality_pairing_check(p: CPoly, q: CPoly, mu: MeasureSpec,
                          gram: GramMatrix | None = None) -> float:
    """Residual of the boundary pairing identity

        integral over T of p * conj(Uq) |dzeta|/2pi  ==  <p, q>_{D(mu)}.

    Only the first deg(p)+1 Taylor coefficients of Uq meet the circle
    integral, and those are exactly the Gram columns applied to q, so the
    check runs in coefficient space; the numerical content of the
    transform itself is validated against :func:`dual_transform_taylor`.
    """
    N = max(p.degree, q.degree, 0)
    if gram is None or gram.space != "dmu" or gram.degree < N:
        gram = gram_matrix("dmu", mu, N)
    G = gram.matrix
    pv = np.zeros(gram.degree + 1, dtype=complex)
    qv = np.zeros(gram.degree + 1, dtype=complex)
    pv[: len(p.coeffs)] = p.coeffs
    qv[: len(q.coeffs)] = q.coeffs
    dual_coeffs = qv @ G  # entry a: <q, z^a>
    lhs = np.sum(pv * np.conj(dual_coeffs))
    rhs = pv @ G @ np.conj(qv)
    return float(abs(lhs - rhs))


# --- harmonic extension space --------------------------------------------------

def hd_norm_sq(f: TrigPoly, mu: MeasureSpec, rule=None) -> float:
    """Norm on the harmonic version of D(mu):

        ||f||^2 = ||f||^2_{L2(T)} + energy(f1) + energy(f2)

    after the orthogonal split f = f1 + conj(f2), f2(0) = 0, using the
    measure-mode seminorm for each analytic part.
    """
    f1, f2 = f.analytic_parts()
    return float(f.l2_norm_sq()
                 + dmu_seminorm_sq(f1, mu, mode="measure", rule=rule)
                 + dmu_seminorm_sq(f2, mu, mode="measure", rule=rule))


def green_check(p: CPoly, rule=None, circ=None) -> float:
    """Residual of the Green identity for u = |p|^2:

        integral over T of |p|^2 = |p(0)|^2 + 2 integral of |p'|^2 log(1/|z|) dA.
    """
    rule = rule or quadrature.disk_rule(64, 128)
    circ = circ or quadrature.circle_rule(max(8, 2 * p.degree + 2))
    lhs = float(np.real(quadrature.integrate(
        circ, lambda z: np.abs(poly_eval(p, z)) ** 2)))
    fp = poly_derivative(p)
    if fp.degree < 0:
        green = 0.0
    else:
        green = quadrature.log_kernel_integral(
            lambda w: np.abs(poly_eval(fp, w)) ** 2, 0.0, rule)
    p0 = abs(poly_eval(p, 0.0)) ** 2 if p.degree >= 0 else 0.0
    return float(abs(lhs - p0 - green))
