import numpy as np
import pytest

from dmu import make_measure


@pytest.fixture(scope="session")
def presets():
    return {
        "dirichlet": make_measure("dirichlet"),
        "hardy": make_measure("hardy"),
        "alpha": make_measure("alpha", alpha=0.5),
        "atom1": make_measure("atoms", atoms=[(1.0, 1.0)]),
    }


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def random_poly(rng, degree):
    coeffs = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    from dmu import CPoly

    return CPoly(coeffs)
