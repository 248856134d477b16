"""Angular-mode evaluation of singular disk integrals.

A field F sampled on a polar tensor grid is decomposed into angular
Fourier modes F_m(r) (FFT per ring) with each mode fitted by a Chebyshev
polynomial in the radius. Both kernels used by the library then reduce,
mode by mode, to one-dimensional partial integrals:

  Cauchy      integral of F(w)/(z - w) dA(w)
  log kernel  integral of log|(1 - conj(w) z)/(z - w)|^2 F(w) dA(w)

with radial factors that are powers of the ratios r/s and s/r (s = |z|),
all bounded by one. That keeps the assembly free of overflow and of the
cancellation that direct power formulas suffer for high modes, and the
constant mode reproduces the exact identities (F == 1 maps to conj(z)
under the Cauchy kernel).
"""
from __future__ import annotations

import numpy as np
from numpy.polynomial import chebyshev

from .quadrature import DiskRule, gauss_panels

__all__ = ["PolarFieldFit", "cauchy_eval", "log_kernel_eval"]

_CHUNK = 48
_Q_INNER = 128         # Gauss points on [0, s]; exact for x^(1+|m|) * fit
_PANELS_OUT = 10       # log-uniform panels on [s, 1]
_Q_OUTER = 24
_S_TINY = 1e-9


class PolarFieldFit:
    """Fourier-in-angle / Chebyshev-in-radius representation of grid samples."""

    def __init__(self, rule: DiskRule, values: np.ndarray,
                 rel_tol: float = 3e-15, radial_degree: int | None = None):
        values = np.asarray(values, dtype=complex)
        if values.shape != (rule.n_r, rule.n_theta):
            raise ValueError("values must have shape (n_r, n_theta)")
        if not np.all(np.isfinite(values)):
            raise ValueError("field samples are not finite")
        self.rule = rule
        n_t = rule.n_theta
        spectrum = np.fft.fft(values, axis=1) / n_t  # column l holds mode m=l (mod n_t)
        self.scale = float(np.max(np.abs(values))) if values.size else 0.0

        half = (n_t - 1) // 2
        candidates = list(range(-half, half + 1))
        kept = []
        thresh = rel_tol * max(self.scale, 1e-300)
        for m in candidates:
            col = spectrum[:, m % n_t]
            if m in (-1, 0, 1) or np.max(np.abs(col)) >= thresh:
                kept.append(m)
        self.ms = np.asarray(sorted(kept), dtype=int)
        F = np.column_stack([spectrum[:, m % n_t] for m in self.ms])

        # Mirror the radial data with the parity F_m(-r) = (-1)^m F_m(r) so the
        # Chebyshev fit interpolates through r = 0 instead of extrapolating
        # below the smallest sample radius.
        r = rule.radii
        r_ext = np.concatenate([-r[::-1], r])
        signs = np.where(np.abs(self.ms) % 2 == 1, -1.0, 1.0)
        F_ext = np.vstack([F[::-1, :] * signs[None, :], F])
        if radial_degree is None:
            radial_degree = min(max(40, rule.n_r), 100, 2 * rule.n_r - 8)
        self.radial_degree = int(max(radial_degree, 6))
        V = chebyshev.chebvander(r_ext, self.radial_degree)
        self.C, *_ = np.linalg.lstsq(V, F_ext, rcond=None)

        # fixed reference Gauss rule on [0, 1] (scaled to [0, s] per target)
        x, w = np.polynomial.legendre.leggauss(_Q_INNER)
        self._x01 = 0.5 * (x + 1.0)
        self._w01 = 0.5 * w

        # moments used by the smooth part of the log kernel: J_m = int r^(|m|+1) F_m dr
        vals01 = self._mode_values(self._x01)  # (Q, K)
        pows = self._x01[:, None] ** (np.abs(self.ms)[None, :] + 1)
        self.J = np.einsum("q,qk,qk->k", self._w01, pows, vals01)

        # limits used for targets at the origin
        xg, wg = gauss_panels(0.0, 1.0, panels=28, pts=12, grade="left")
        valsg = self._mode_values(xg)
        i0 = int(np.searchsorted(self.ms, 0))
        self._int_rlnr_F0 = complex(np.sum(wg * xg * np.log(xg) * valsg[:, i0])) \
            if self.ms[i0] == 0 else 0.0
        if 1 in self.ms:
            i1 = int(np.searchsorted(self.ms, 1))
            self._int_F1 = complex(np.sum(wg * valsg[:, i1]))
        else:
            self._int_F1 = 0.0

    def _mode_values(self, r_flat: np.ndarray) -> np.ndarray:
        """Evaluate every kept mode's radial fit at the given radii."""
        V = chebyshev.chebvander(np.asarray(r_flat, float), self.radial_degree)
        return V @ self.C

    # --- per-target node sets -------------------------------------------------

    def _outer_nodes(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Composite Gauss nodes/weights on [s_c, 1], log-uniform panels."""
        s = np.maximum(s, _S_TINY)
        frac = np.arange(_PANELS_OUT + 1) / _PANELS_OUT
        edges = s[:, None] ** (1.0 - frac[None, :])  # (C, P+1), increasing
        x, w = np.polynomial.legendre.leggauss(_Q_OUTER)
        lo = edges[:, :-1, None]
        h = 0.5 * (edges[:, 1:, None] - lo)
        nodes = lo + h * (x[None, None, :] + 1.0)
        weights = h * w[None, None, :]
        C = len(s)
        return nodes.reshape(C, -1), weights.reshape(C, -1)


def _phases(phi: np.ndarray, expnt: np.ndarray) -> np.ndarray:
    return np.exp(1j * np.outer(phi, expnt))


def cauchy_eval(fit: PolarFieldFit, targets: np.ndarray) -> np.ndarray:
    """Cauchy transform of the fitted field at each target in the closed disk."""
    targets = np.asarray(targets, dtype=complex).ravel()
    out = np.zeros(len(targets), dtype=complex)
    ms = fit.ms
    neg = ms <= 0
    pos = ms >= 1
    ms_neg = ms[neg]
    ms_pos = ms[pos]
    # fixed inner power matrix: x^(1-m) at reference nodes, m <= 0
    pow_in = fit._x01[:, None] ** (1 - ms_neg)[None, :]
    w_pow_in = fit._w01[:, None] * pow_in  # (Q, K-)

    for lo in range(0, len(targets), _CHUNK):
        sl = slice(lo, min(lo + _CHUNK, len(targets)))
        z = targets[sl]
        s = np.abs(z)
        tiny = s < _S_TINY
        phi = np.where(tiny, 0.0, np.angle(z))
        C = len(z)

        # inner side [0, s]: modes m <= 0
        r_in = s[:, None] * fit._x01[None, :]
        vals_in = fit._mode_values(r_in.ravel()).reshape(C, _Q_INNER, -1)
        inner = np.einsum("qk,cqk->ck", w_pow_in, vals_in[:, :, neg])
        acc = 2.0 * s[:, None] * inner * _phases(phi, ms_neg - 1)
        contrib = acc.sum(axis=1)

        # outer side [s, 1]: modes m >= 1
        if ms_pos.size:
            r_out, w_out = fit._outer_nodes(s)
            vals_out = fit._mode_values(r_out.ravel()).reshape(C, r_out.shape[1], -1)
            with np.errstate(divide="ignore"):
                lratio = np.log(np.maximum(s, _S_TINY))[:, None] - np.log(r_out)
            powers = np.exp(lratio[:, :, None] * (ms_pos - 1)[None, None, :])
            outer = np.einsum("cj,cjk,cjk->ck", w_out, powers, vals_out[:, :, pos])
            contrib = contrib - 2.0 * (outer * _phases(phi, ms_pos - 1)).sum(axis=1)

        if np.any(tiny):
            contrib[tiny] = -2.0 * fit._int_F1
        out[sl] = contrib
    return out


def log_kernel_eval(fit: PolarFieldFit, targets: np.ndarray) -> np.ndarray:
    """Integral of log|(1 - conj(w) z)/(z - w)|^2 F(w) dA(w) at each target.

    Returned as the smooth part minus the singular part; both are summed
    mode by mode with ratio-stabilized radial factors.
    """
    targets = np.asarray(targets, dtype=complex).ravel()
    if np.any(np.abs(targets) >= 1.0):
        raise ValueError("log kernel targets must satisfy |z| < 1")
    out = np.zeros(len(targets), dtype=complex)
    ms = fit.ms
    nz = ms != 0
    ms_nz = ms[nz]
    i0 = int(np.searchsorted(ms, 0))
    has0 = i0 < len(ms) and ms[i0] == 0
    # fixed inner power matrix: x^(|m|+1) at reference nodes (m != 0)
    pow_in = fit._x01[:, None] ** (np.abs(ms_nz) + 1)[None, :]
    w_pow_in = fit._w01[:, None] * pow_in
    w_x_in = fit._w01 * fit._x01

    for lo in range(0, len(targets), _CHUNK):
        sl = slice(lo, min(lo + _CHUNK, len(targets)))
        z = targets[sl]
        s = np.abs(z)
        tiny = s < _S_TINY
        phi = np.where(tiny, 0.0, np.angle(z))
        C = len(z)
        s_safe = np.maximum(s, _S_TINY)

        # smooth part: P1 = -sum_m (2/|m|) e^{im phi} s^{|m|} J_m
        if ms_nz.size:
            sm = s[:, None] ** np.abs(ms_nz)[None, :]
            p1 = -(2.0 / np.abs(ms_nz))[None, :] * sm * fit.J[None, nz] * _phases(phi, ms_nz)
            p1 = p1.sum(axis=1)
        else:
            p1 = np.zeros(C, dtype=complex)

        # singular part P2
        r_in = s[:, None] * fit._x01[None, :]
        vals_in = fit._mode_values(r_in.ravel()).reshape(C, _Q_INNER, -1)
        r_out, w_out = fit._outer_nodes(s)
        vals_out = fit._mode_values(r_out.ravel()).reshape(C, r_out.shape[1], -1)

        p2 = np.zeros(C, dtype=complex)
        if has0:
            in0 = np.einsum("q,cq->c", w_x_in, vals_in[:, :, i0]) * s ** 2
            out0 = np.einsum("cj,cj,cj->c", w_out, r_out * np.log(r_out), vals_out[:, :, i0])
            p2 = 4.0 * (np.log(s_safe) * in0 + out0)
        if ms_nz.size:
            inner = np.einsum("qk,cqk->ck", w_pow_in, vals_in[:, :, nz]) * (s ** 2)[:, None]
            with np.errstate(divide="ignore"):
                lratio = np.log(s_safe)[:, None] - np.log(r_out)
            powers = np.exp(lratio[:, :, None] * np.abs(ms_nz)[None, None, :])
            outer = np.einsum("cj,cj,cjk,cjk->ck", w_out, r_out, powers, vals_out[:, :, nz])
            p2 = p2 - ((2.0 / np.abs(ms_nz))[None, :] * (inner + outer)
                       * _phases(phi, ms_nz)).sum(axis=1)

        contrib = p1 - p2
        if np.any(tiny):
            contrib[tiny] = -4.0 * fit._int_rlnr_F0
        out[sl] = contrib
    return out
