import numpy as np
import pytest
from hypothesis import settings

from darkladder.hilbert import HilbertSpec

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def random_density_matrix(dim, rng, rank=None):
    rank = rank or dim
    m = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def small_spec():
    return HilbertSpec(3)
