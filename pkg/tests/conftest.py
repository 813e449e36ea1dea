import pytest

from graphydro import _backend


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run the test under every importable kernel backend."""
    prev = _backend.use(request.param)
    yield request.param
    _backend.use(prev)
