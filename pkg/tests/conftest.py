import pytest

from sharpkato import kernels


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Run the test once per importable kernel backend."""
    previous = kernels.backend()
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)
