import numpy as np
import pytest

from rlpc import benford_pmf


@pytest.fixture
def benford():
    return benford_pmf()


@pytest.fixture
def rng():
    return np.random.default_rng(20240511)
