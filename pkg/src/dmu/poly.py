"""Complex polynomial and trigonometric polynomial arithmetic.

Polynomials are the dense test class on which every space operation is
evaluated exactly or near-exactly: differentiation, synthetic division,
backward shifts and Hardy-space norms are plain coefficient arithmetic.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CPoly",
    "TrigPoly",
    "poly_eval",
    "poly_derivative",
    "difference_quotient",
    "backward_shift",
    "h2_norm_sq",
    "h2_norm_green",
]


def _trim(coeffs: np.ndarray) -> np.ndarray:
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return np.ascontiguousarray(coeffs[:n])


class CPoly:
    """Polynomial sum_k c[k] z^k with complex coefficients.

    Trailing zero coefficients are trimmed on construction; the zero
    polynomial has an empty coefficient vector and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex] = ()):
        self.coeffs = _trim(np.asarray(list(coeffs), dtype=complex))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return poly_eval(self, z)

    def __add__(self, other: "CPoly") -> "CPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] += b
        return CPoly(out)

    def __sub__(self, other: "CPoly") -> "CPoly":
        return self + (-other)

    def __neg__(self) -> "CPoly":
        return CPoly(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, CPoly):
            if len(self.coeffs) == 0 or len(other.coeffs) == 0:
                return CPoly()
            return CPoly(np.convolve(self.coeffs, other.coeffs))
        return CPoly(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, CPoly) and self.coeffs.shape == other.coeffs.shape \
            and bool(np.all(self.coeffs == other.coeffs))

    def __repr__(self) -> str:
        return f"CPoly({list(self.coeffs)})"

    def derivative(self) -> "CPoly":
        return poly_derivative(self)

    def conjugate_coeffs(self) -> "CPoly":
        """Polynomial with conjugated coefficients, so q(conj(z)) = conj(p(z))."""
        return CPoly(np.conj(self.coeffs))

    def to_json(self) -> list:
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[float]]) -> "CPoly":
        return cls([complex(re, im) for re, im in data])

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "CPoly":
        coeffs = np.zeros(k + 1, dtype=complex)
        coeffs[k] = c
        return cls(coeffs)


def poly_eval(p: CPoly, z):
    """Horner evaluation; `z` may be a scalar or an ndarray."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for c in p.coeffs[::-1]:
        out = out * z + c
    if out.ndim == 0:
        return complex(out)
    return out


def poly_derivative(p: CPoly) -> CPoly:
    if p.degree <= 0:
        return CPoly()
    k = np.arange(1, p.degree + 1)
    return CPoly(p.coeffs[1:] * k)


def difference_quotient(f: CPoly, lam: complex) -> CPoly:
    """Exact polynomial quotient (f - f(lam)) / (z - lam) by synthetic division.

    Satisfies (z - lam) * result + f(lam) == f identically for any lam in C.
    """
    if f.degree <= 0:
        return CPoly()
    lam = complex(lam)
    d = f.degree
    out = np.zeros(d, dtype=complex)
    acc = f.coeffs[d]
    for k in range(d - 1, -1, -1):
        out[k] = acc
        acc = f.coeffs[k] + lam * acc
    return CPoly(out)


def backward_shift(f: CPoly) -> CPoly:
    """L f = (f - f(0)) / z: drop the constant coefficient and shift down."""
    if f.degree <= 0:
        return CPoly()
    return CPoly(f.coeffs[1:])


def h2_norm_sq(f: CPoly) -> float:
    """Hardy space norm squared: sum of squared coefficient moduli."""
    if len(f.coeffs) == 0:
        return 0.0
    return float(np.sum(np.abs(f.coeffs) ** 2))


def h2_norm_green(f: CPoly, rule=None) -> float:
    """Hardy norm squared via the Green identity
    |f(0)|^2 + 2 * integral of |f'|^2 log(1/|z|) over the disk,
    computed by quadrature. Exposed as the numerical cross-check of
    :func:`h2_norm_sq`.
    """
    from . import quadrature

    if rule is None:
        rule = quadrature.disk_rule(64, 128)
    fp = poly_derivative(f)
    if fp.degree < 0:
        green = 0.0
    else:
        green = quadrature.log_kernel_integral(
            lambda w: np.abs(poly_eval(fp, w)) ** 2, 0.0, rule
        )
    f0 = poly_eval(f, 0.0) if f.degree >= 0 else 0.0
    return float(abs(f0) ** 2 + green)


class TrigPoly:
    """Trigonometric polynomial sum_{m=-M..M} c_m zeta^m on the unit circle.

    Coefficients are stored in a dense vector indexed by m + M. The
    polynomial is real-valued on the circle iff c_{-m} == conj(c_m).
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[complex]):
        coeffs = np.asarray(list(coeffs), dtype=complex)
        if len(coeffs) != 2 * order + 1:
            raise ValueError("need 2*order+1 coefficients")
        self.order = int(order)
        self.coeffs = coeffs

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, complex]]) -> "TrigPoly":
        pairs = list(pairs)
        order = max((abs(int(m)) for m, _ in pairs), default=0)
        coeffs = np.zeros(2 * order + 1, dtype=complex)
        for m, c in pairs:
            coeffs[int(m) + order] += complex(c)
        return cls(order, coeffs)

    def coeff(self, m: int) -> complex:
        if abs(m) > self.order:
            return 0.0
        return complex(self.coeffs[m + self.order])

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        out = np.zeros_like(zeta)
        for m in range(-self.order, self.order + 1):
            out = out + self.coeff(m) * zeta ** m
        if out.ndim == 0:
            return complex(out)
        return out

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        flipped = np.conj(self.coeffs[::-1])
        return bool(np.max(np.abs(self.coeffs - flipped)) <= tol)

    def l2_norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def analytic_parts(self) -> tuple[CPoly, CPoly]:
        """Split f = f1 + conj(f2) with f2(0) = 0.

        Coefficients with m >= 0 feed f1, those with m < 0 feed f2 via
        f2[k] = conj(c_{-k}) for k >= 1.
        """
        f1 = CPoly(self.coeffs[self.order:])
        neg = self.coeffs[: self.order][::-1]  # c_{-1}, c_{-2}, ...
        f2 = CPoly(np.concatenate([[0.0], np.conj(neg)]))
        return f1, f2

    def to_json(self) -> dict:
        return {
            "coeffs": [
                [m - self.order, float(c.real), float(c.imag)]
                for m, c in enumerate(self.coeffs)
                if c != 0
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "TrigPoly":
        return cls.from_pairs((int(m), complex(re, im)) for m, re, im in data["coeffs"])
