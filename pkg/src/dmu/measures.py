"""Finite positive Borel measures on the closed unit disk.

A measure is a sum of three parts: point atoms anywhere in the closed
disk, a density on the circle given by a Hermitian trigonometric
polynomial (against |dzeta|/2pi), and a density on the open disk
(against normalized area). Atoms sitting exactly on the circle are
routed to the circle component of every potential formula.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .poly import TrigPoly

__all__ = [
    "DiskDensity",
    "MeasureSpec",
    "make_measure",
    "total_mass",
    "validate_measure",
    "merge_measures",
]

_BOUNDARY_TOL = 1e-12
_NEG_TOL = 1e-10


@dataclass(frozen=True)
class DiskDensity:
    """Evaluable nonnegative density on the open disk against dA.

    Presets carry closed-form radial structure: kind "hardy" is
    1 - |w|^2, kind "alpha" is the superharmonic weight density whose
    Dirichlet space is the power-weighted one,

        (1 - a) (1 - |w|^2)^(-a) * ((1 - |w|^2) + a |w|^2),  0 < a < 1.

    Custom densities supply a callable on complex arrays; set
    radial=True only if the callable depends on |w| alone.
    """

    kind: str
    alpha: float | None = None
    fn: Callable | None = None
    radial: bool = False

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        x = np.abs(w) ** 2
        if self.kind == "hardy":
            return 1.0 - x
        if self.kind == "alpha":
            a = self.alpha
            return (1.0 - a) * (1.0 - x) ** (-a) * ((1.0 - x) + a * x)
        return np.asarray(self.fn(w), dtype=float)

    def radial_profile(self, x):
        """Density as a function of x = |w|^2 (radial densities only)."""
        if not self.is_radial:
            raise ValueError("density is not radial")
        x = np.asarray(x, dtype=float)
        return self(np.sqrt(x).astype(complex))

    @property
    def is_radial(self) -> bool:
        return self.kind in ("hardy", "alpha") or self.radial

    def to_json(self) -> dict:
        if self.kind == "hardy":
            return {"kind": "hardy"}
        if self.kind == "alpha":
            return {"kind": "alpha", "alpha": self.alpha}
        raise ValueError("custom disk densities are not JSON-serializable")

    @classmethod
    def from_json(cls, data: dict) -> "DiskDensity":
        kind = data["kind"]
        if kind == "hardy":
            return cls(kind="hardy")
        if kind == "alpha":
            return cls(kind="alpha", alpha=float(data["alpha"]))
        raise ValueError(f"unknown disk density kind {kind!r}")


@dataclass(frozen=True)
class MeasureSpec:
    """Finite positive measure mu = atoms + circle density + disk density."""

    label: str
    atoms: tuple[tuple[complex, float], ...] = ()
    circle: TrigPoly | None = None
    disk: DiskDensity | None = None

    @property
    def boundary_atoms(self) -> list[tuple[complex, float]]:
        return [(loc, m) for loc, m in self.atoms if abs(abs(loc) - 1.0) <= _BOUNDARY_TOL]

    @property
    def interior_atoms(self) -> list[tuple[complex, float]]:
        return [(loc, m) for loc, m in self.atoms if abs(abs(loc) - 1.0) > _BOUNDARY_TOL]

    @property
    def is_radial(self) -> bool:
        """True when the measure is rotation invariant, so both weights are radial."""
        if self.atoms:
            radial_atoms = all(abs(loc) <= _BOUNDARY_TOL for loc, _ in self.atoms)
            if not radial_atoms:
                return False
        if self.circle is not None:
            off = [m for m in range(-self.circle.order, self.circle.order + 1)
                   if m != 0 and self.circle.coeff(m) != 0]
            if off:
                return False
        if self.disk is not None and not self.disk.is_radial:
            return False
        return True

    @property
    def is_zero(self) -> bool:
        return not self.atoms and self.circle is None and self.disk is None

    def to_json(self) -> dict:
        out: dict = {"label": self.label}
        out["atoms"] = [[loc.real, loc.imag, mass] for loc, mass in self.atoms]
        if self.circle is not None:
            out["circle_density"] = self.circle.to_json()
        if self.disk is not None:
            out["disk_density"] = self.disk.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "MeasureSpec":
        atoms = tuple((complex(re, im), float(mass))
                      for re, im, mass in data.get("atoms", []))
        circle = TrigPoly.from_json(data["circle_density"]) \
            if data.get("circle_density") else None
        disk = DiskDensity.from_json(data["disk_density"]) \
            if data.get("disk_density") else None
        return cls(label=data.get("label", "measure"),
                   atoms=atoms, circle=circle, disk=disk)


def make_measure(preset: str, *, alpha: float | None = None,
                 atoms: Sequence[tuple[complex, float]] | None = None,
                 spec: MeasureSpec | None = None, label: str | None = None) -> MeasureSpec:
    """Build one of the canonical measures.

    hardy     disk density 1 - |w|^2 (the space is the Hardy space)
    dirichlet unit circle density (the space is the Dirichlet space)
    alpha     radial disk density reproducing the power weight (1-|w|^2)^(1-alpha)
    atoms     pure atomic measure from (location, mass) pairs
    custom    pass a prebuilt MeasureSpec through validation
    """
    if preset == "hardy":
        mu = MeasureSpec(label=label or "hardy", disk=DiskDensity(kind="hardy"))
    elif preset == "dirichlet":
        mu = MeasureSpec(label=label or "dirichlet",
                         circle=TrigPoly.from_pairs([(0, 1.0)]))
    elif preset == "alpha":
        if alpha is None or not (0.0 < alpha < 1.0):
            raise ValueError("alpha preset needs 0 < alpha < 1")
        mu = MeasureSpec(label=label or f"alpha({alpha})",
                         disk=DiskDensity(kind="alpha", alpha=float(alpha)))
    elif preset == "atoms":
        if not atoms:
            raise ValueError("atoms preset needs a nonempty list of (location, mass)")
        mu = MeasureSpec(label=label or "atoms",
                         atoms=tuple((complex(l), float(m)) for l, m in atoms))
    elif preset == "custom":
        if spec is None:
            raise ValueError("custom preset needs a MeasureSpec")
        mu = spec
    else:
        raise ValueError(f"unknown measure preset {preset!r}")
    problems = validate_measure(mu)
    if problems:
        raise ValueError("invalid measure: " + "; ".join(problems))
    return mu


def total_mass(mu: MeasureSpec, rule=None) -> float:
    """mu of the closed disk: atom masses + circle integral + disk integral."""
    mass = sum(m for _, m in mu.atoms)
    if mu.circle is not None:
        mass += mu.circle.coeff(0).real
    if mu.disk is not None:
        mass += _disk_density_mass(mu.disk, rule)
    return float(mass)


def _disk_density_mass(d: DiskDensity, rule=None) -> float:
    from . import quadrature

    if d.kind == "hardy":
        return 0.5
    if d.kind == "alpha":
        return 1.0 / (2.0 - d.alpha)
    if d.is_radial:
        x, w = quadrature.gauss_panels(0.0, 1.0, panels=32, pts=16, grade="right")
        return float(np.sum(w * d.radial_profile(x)))
    if rule is None:
        rule = quadrature.disk_rule(96, 192)
    return float(np.real(quadrature.integrate(rule, d)))


def validate_measure(mu: MeasureSpec, rule=None) -> list[str]:
    """Check the model invariants; returns a list of violations (empty = valid)."""
    from . import quadrature

    problems: list[str] = []
    for loc, mass in mu.atoms:
        if not (mass > 0.0) or not math.isfinite(mass):
            problems.append(f"atom at {loc}: mass {mass} is not positive and finite")
        if abs(loc) > 1.0 + _BOUNDARY_TOL:
            problems.append(f"atom outside closed disk: {loc}")
    if mu.circle is not None:
        if not mu.circle.is_hermitian(tol=1e-12):
            problems.append("circle density coefficients are not Hermitian (density not real)")
        n = max(512, 8 * mu.circle.order + 1)
        vals = np.real(mu.circle(quadrature.circle_rule(n).nodes))
        if np.min(vals) < -_NEG_TOL:
            problems.append(
                f"negative circle density at node (min {np.min(vals):.3e})")
    if mu.disk is not None:
        if mu.disk.kind == "alpha" and not (0.0 < (mu.disk.alpha or 0.0) < 1.0):
            problems.append("alpha density needs 0 < alpha < 1")
        nodes = (rule or quadrature.disk_rule(48, 96)).nodes
        vals = np.asarray(mu.disk(nodes), dtype=float)
        if not np.all(np.isfinite(vals)):
            problems.append("disk density is not finite at a quadrature node")
        elif np.min(vals) < -_NEG_TOL:
            problems.append(f"negative disk density at node (min {np.min(vals):.3e})")
    if not problems and not mu.is_zero:
        mass = total_mass(mu, rule)
        if not (mass > 0.0) or not math.isfinite(mass):
            problems.append(f"total mass {mass} is not positive and finite")
    return problems


def merge_measures(label: str, *parts: MeasureSpec) -> MeasureSpec:
    """Sum of measures (used for additivity checks)."""
    atoms: list[tuple[complex, float]] = []
    circles = [p.circle for p in parts if p.circle is not None]
    disks = [p.disk for p in parts if p.disk is not None]
    for p in parts:
        atoms.extend(p.atoms)
    circle = None
    if circles:
        pairs = []
        for c in circles:
            pairs.extend((m, c.coeff(m)) for m in range(-c.order, c.order + 1))
        circle = TrigPoly.from_pairs(pairs)
    disk = None
    if disks:
        if len(disks) == 1:
            disk = disks[0]
        else:
            fns = list(disks)
            disk = DiskDensity(
                kind="custom",
                fn=lambda w, fns=fns: sum(np.asarray(f(w), dtype=float) for f in fns),
                radial=all(f.is_radial for f in fns),
            )
    return MeasureSpec(label=label, atoms=tuple(atoms), circle=circle, disk=disk)
