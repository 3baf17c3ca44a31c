import numpy as np
import pytest

from edgelbp import kernels


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Run the test once per kernel backend, restoring the previous choice."""
    previous = kernels.active_backend()
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


def random_gray(rng, h, w):
    """Random uint8 image with the full intensity range available."""
    return rng.integers(0, 256, size=(h, w), dtype=np.int64).astype(np.uint8)
