"""Finite-dimensional certification of multiplier and Carleson bounds.

All certificates here are subspace shadows: restricting to polynomials of
degree at most N turns embedding constants and multiplier norms into
generalized eigenvalue problems against the Gram matrices. The reported
constants are certified lower bounds, nondecreasing in N; no claim is
ever made that a measure fails to be Carleson.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cholesky, eigh, eigvalsh

from . import moments, quadrature, spaces
from .measures import MeasureSpec
from .poly import CPoly, poly_derivative, poly_eval

__all__ = [
    "CarlesonReport",
    "MultiplierCertificate",
    "carleson_constant",
    "multiplier_norm_lb",
    "multiplier_certificate",
    "shift_norm",
    "pick_positivity",
    "sup_circle_abs",
]


@dataclass(frozen=True)
class CarlesonReport:
    """Largest generalized eigenvalue of the embedding at degree N."""

    constant: float
    degree: int
    measure_label: str
    base_label: str
    refinement_delta: float
    gram_condition: float


def _monomial_measure_matrix(nu: MeasureSpec, N: int, rule=None) -> np.ndarray:
    """A[j][k] = integral of z^j conj(z)^k d nu over the disk."""
    if nu.circle is not None:
        raise ValueError("embedding measures must have no circle part")
    A = np.zeros((N + 1, N + 1), dtype=complex)
    j = np.arange(N + 1)
    for loc, mass in nu.atoms:
        v = np.asarray(loc, dtype=complex) ** j
        A += mass * np.outer(v, np.conj(v))
    if nu.disk is not None:
        if nu.disk.is_radial:
            A[j, j] += moments.radial_density_moments(nu.disk, N + 1)
        else:
            r = rule or quadrature.disk_rule(96, 192)
            z = r.nodes.ravel()
            w = r.weights.ravel() * np.asarray(nu.disk(z), dtype=float)
            zj = z[None, :] ** j[:, None]
            A += np.einsum("an,bn,n->ab", zj, np.conj(zj), w)
    return A


def _max_generalized_eig(A: np.ndarray, G: np.ndarray) -> float:
    """Largest lambda with A v = lambda G v, via Cholesky whitening."""
    L = cholesky(G, lower=True)
    Linv = np.linalg.inv(L)
    W = Linv @ A @ Linv.conj().T
    W = 0.5 * (W + W.conj().T)
    return float(np.max(eigvalsh(W)))


def carleson_constant(nu: MeasureSpec, mu: MeasureSpec, N: int,
                      rule=None) -> CarlesonReport:
    """Certified lower bound for the D(mu)-Carleson constant of nu:

        sup over deg <= N of (integral |f|^2 d nu) / ||f||^2_{D(mu)}.
    """
    gram = spaces.gram_matrix("dmu", mu, N, rule=rule)
    A = _monomial_measure_matrix(nu, N, rule=rule)
    constant = _max_generalized_eig(A, gram.matrix)
    if N >= 1:
        prev = _max_generalized_eig(A[:N, :N], gram.matrix[:N, :N])
    else:
        prev = constant
    cond = float(np.linalg.cond(gram.matrix))
    return CarlesonReport(constant=constant, degree=N, measure_label=nu.label,
                          base_label=mu.label, refinement_delta=constant - prev,
                          gram_condition=cond)


def _multiplication_matrix(phi: CPoly, N: int) -> np.ndarray:
    """Coefficient map p -> phi p from degree <= N into degree <= N + deg phi."""
    d = max(phi.degree, 0)
    T = np.zeros((N + d + 1, N + 1), dtype=complex)
    for c, coeff in enumerate(phi.coeffs):
        T[np.arange(N + 1) + c, np.arange(N + 1)] += coeff
    return T


def multiplier_norm_lb(phi: CPoly, mu: MeasureSpec, N: int, space: str = "dmu",
                       rule=None) -> float:
    """sup over deg <= N of ||phi p|| / ||p||: a lower bound for the
    multiplier norm, nondecreasing in N."""
    if phi.degree < 0:
        return 0.0
    G_small = spaces.gram_matrix(space, mu, N, rule=rule).matrix
    G_big = spaces.gram_matrix(space, mu, N + phi.degree, rule=rule).matrix
    T = _multiplication_matrix(phi, N)
    A = T.conj().T @ G_big @ T
    A = 0.5 * (A + A.conj().T)
    return math.sqrt(max(_max_generalized_eig(A, G_small), 0.0))


def shift_norm(space: str, mu: MeasureSpec, N: int, rule=None) -> float:
    """Exact operator norm of multiplication by z from degree <= N
    into degree <= N+1 in the given space."""
    return multiplier_norm_lb(CPoly([0.0, 1.0]), mu, N, space=space, rule=rule)


def sup_circle_abs(phi: CPoly) -> float:
    """Exact maximum of |phi| on the unit circle via trig critical points.

    |phi|^2 on the circle is a trig polynomial whose angular derivative
    has root set computable as polynomial roots; the maximum over the
    unimodular roots (plus a dense fallback grid) is returned.
    """
    if phi.degree < 0:
        return 0.0
    if phi.degree == 0:
        return float(abs(phi.coeffs[0]))
    d = phi.degree
    # autocorrelation coefficients of |phi|^2: c_m = sum_k phi_k conj(phi_{k-m})
    c = np.correlate(phi.coeffs, np.conj(phi.coeffs[::-1]), mode="full")[::-1]
    # c has indices m = -d..d; derivative symbol: sum_m i m c_m zeta^{m+d}
    m = np.arange(-d, d + 1)
    sym = 1j * m * c
    roots = np.roots(sym[::-1]) if np.any(sym != 0) else np.array([])
    cand = [r / abs(r) for r in roots if abs(abs(r) - 1.0) < 1e-6]
    cand.extend(np.exp(2j * np.pi * np.arange(64) / 64))
    vals = [abs(poly_eval(phi, z)) for z in cand]
    return float(max(vals))


@dataclass(frozen=True)
class MultiplierCertificate:
    """Boundedness + Carleson data certifying the multiplier criterion
    at resolution (N, rule): phi multiplies D(mu) iff it is bounded and
    |phi'|^2 V_mu dA embeds."""

    phi_degree: int
    sup_circle: float
    carleson: CarlesonReport
    norm_lower_bound: float


def multiplier_certificate(phi: CPoly, mu: MeasureSpec, N: int = 20,
                           rule=None) -> MultiplierCertificate:
    sup_t = sup_circle_abs(phi)
    gram = spaces.gram_matrix("dmu", mu, N, rule=rule)
    fp = poly_derivative(phi)
    if fp.degree < 0:
        A = np.zeros((N + 1, N + 1), dtype=complex)
    else:
        M = moments.poisson_moment_matrix(mu, N + fp.degree, N + fp.degree, rule=rule)
        A = np.zeros((N + 1, N + 1), dtype=complex)
        for c, cc in enumerate(fp.coeffs):
            for e, ce in enumerate(fp.coeffs):
                A += cc * np.conj(ce) * M[c:c + N + 1, e:e + N + 1]
    A = 0.5 * (A + A.conj().T)
    constant = _max_generalized_eig(A, gram.matrix)
    if N >= 1:
        prev = _max_generalized_eig(A[:N, :N], gram.matrix[:N, :N])
    else:
        prev = constant
    report = CarlesonReport(constant=constant, degree=N,
                            measure_label=f"|phi'|^2 V d A ({mu.label})",
                            base_label=mu.label,
                            refinement_delta=constant - prev,
                            gram_condition=float(np.linalg.cond(gram.matrix)))
    lb = multiplier_norm_lb(phi, mu, min(N, 12), rule=rule)
    return MultiplierCertificate(phi_degree=phi.degree, sup_circle=sup_t,
                                 carleson=report, norm_lower_bound=lb)


def pick_positivity(space: str, mu: MeasureSpec, N: int, phi: CPoly,
                    points, rule=None) -> float:
    """Minimum eigenvalue of the Pick matrix

        [(1 - conj(phi(w_i)) phi(w_j)) K_N(w_j, w_i)]_{i,j}

    for the degree-truncated kernel of the space. Nonnegative in the
    limit for contractive multipliers; small negative values at finite N
    measure the truncation.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    gram = spaces.gram_matrix(space, mu, N, rule=rule)
    K = spaces.KernelApprox(gram).matrix(pts)
    pv = poly_eval(phi, pts)
    P = (1.0 - np.outer(np.conj(pv), pv)) * K
    P = 0.5 * (P + P.conj().T)
    return float(np.min(eigvalsh(P)))
