import numpy as np
import pytest

from landau_holonomy import build_basis


@pytest.fixture(scope="session")
def basis20():
    return build_basis(20, 3)


@pytest.fixture(scope="session")
def basis40():
    return build_basis(40, 3)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)
