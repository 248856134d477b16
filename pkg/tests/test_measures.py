import json

import numpy as np
import pytest

from dmu import MeasureSpec, make_measure, total_mass, validate_measure
from dmu.measures import DiskDensity, merge_measures
from dmu.poly import TrigPoly


def test_presets_construct():
    assert make_measure("hardy").disk.kind == "hardy"
    d = make_measure("dirichlet")
    assert d.circle.coeff(0) == 1.0 and d.circle.order == 0
    a = make_measure("alpha", alpha=0.25)
    assert a.disk.alpha == 0.25
    at = make_measure("atoms", atoms=[(1.0, 1.0)])
    assert at.atoms == ((1.0 + 0j, 1.0),)


def test_preset_errors():
    with pytest.raises(ValueError):
        make_measure("unknown")
    with pytest.raises(ValueError):
        make_measure("alpha", alpha=1.5)
    with pytest.raises(ValueError):
        make_measure("atoms", atoms=[(2.0, 1.0)])
    with pytest.raises(ValueError):
        make_measure("atoms", atoms=[(0.5, -1.0)])


def test_total_mass_examples():
    assert total_mass(make_measure("dirichlet")) == pytest.approx(1.0)
    assert total_mass(make_measure("hardy")) == pytest.approx(0.5)
    assert total_mass(make_measure("atoms", atoms=[(1j, 2.5)])) == pytest.approx(2.5)
    # alpha mass 1/(2-alpha), cross-checked by quadrature below
    assert total_mass(make_measure("alpha", alpha=0.5)) == pytest.approx(2 / 3)


def test_alpha_mass_quadrature_oracle():
    from dmu.quadrature import gauss_panels

    d = DiskDensity(kind="alpha", alpha=0.3)
    x, w = gauss_panels(0.0, 1.0, panels=40, pts=16, grade="right")
    got = float(np.sum(w * d.radial_profile(x)))
    assert got == pytest.approx(1.0 / (2.0 - 0.3), rel=1e-9)


def test_alpha_density_symbolic_rederivation():
    # the alpha preset density must equal -(1-|w|^2) d dbar (1-|w|^2)^(1-a)
    sympy = pytest.importorskip("sympy")
    w, wb = sympy.symbols("w wb")
    a = sympy.Rational(1, 3)
    u = (1 - w * wb) ** (1 - a)
    lap = sympy.diff(sympy.diff(u, wb), w)
    density = sympy.simplify(-(1 - w * wb) * lap)
    x = sympy.symbols("x", positive=True)
    target = (1 - a) * (1 - x) ** (-a) * ((1 - x) + a * x)
    diff = sympy.simplify(density.subs(w * wb, x) - target)
    assert sympy.simplify(diff) == 0
    # numeric nonnegativity on a grid
    d = DiskDensity(kind="alpha", alpha=float(a))
    xs = np.linspace(0, 0.999999, 2000)
    assert np.min(d.radial_profile(xs)) >= 0.0


def test_validation_examples():
    bad = MeasureSpec(label="bad", atoms=((2.0 + 0j, 1.0),))
    assert any("outside" in v for v in validate_measure(bad))
    assert validate_measure(make_measure("hardy")) == []
    cos2 = MeasureSpec(label="cos", circle=TrigPoly.from_pairs([(1, 1.0), (-1, 1.0)]))
    assert any("negative circle density" in v for v in validate_measure(cos2))


def test_validation_nonhermitian_circle():
    bad = MeasureSpec(label="x", circle=TrigPoly.from_pairs([(1, 1.0)]))
    assert any("Hermitian" in v for v in validate_measure(bad))


def test_zero_measure_allowed():
    zero = MeasureSpec(label="zero")
    assert validate_measure(zero) == []
    assert total_mass(zero) == 0.0


def test_mass_additivity():
    mu1 = make_measure("hardy")
    mu2 = make_measure("atoms", atoms=[(0.5j, 0.75)])
    mu3 = make_measure("dirichlet")
    merged = merge_measures("sum", mu1, mu2, mu3)
    want = total_mass(mu1) + total_mass(mu2) + total_mass(mu3)
    assert total_mass(merged) == pytest.approx(want, rel=1e-12)


def test_json_roundtrip_bit_exact():
    mu = MeasureSpec(
        label="mix",
        atoms=((0.25 + 0.125j, 0.7), (1.0 + 0j, 0.3)),
        circle=TrigPoly.from_pairs([(0, 2.0), (1, 0.25 - 0.125j), (-1, 0.25 + 0.125j)]),
        disk=DiskDensity(kind="alpha", alpha=0.5),
    )
    data = json.loads(json.dumps(mu.to_json()))
    back = MeasureSpec.from_json(data)
    assert back.atoms == mu.atoms
    assert np.array_equal(back.circle.coeffs, mu.circle.coeffs)
    assert back.disk.kind == "alpha" and back.disk.alpha == 0.5
    assert back.to_json() == mu.to_json()


def test_custom_density_not_serializable():
    d = DiskDensity(kind="custom", fn=lambda w: np.abs(w) ** 2, radial=True)
    with pytest.raises(ValueError):
        d.to_json()


def test_boundary_atom_routing():
    mu = make_measure("atoms", atoms=[(1.0, 1.0), (0.25, 2.0)])
    assert len(mu.boundary_atoms) == 1
    assert len(mu.interior_atoms) == 1
