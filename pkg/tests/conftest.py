import numpy as np
import pytest

from orthrange import kernels


@pytest.fixture(params=kernels.available())
def each_backend(request):
    """Run the test once per available kernel backend."""
    with kernels.backend(request.param):
        yield request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
