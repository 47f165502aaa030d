import pytest
from hypothesis import HealthCheck, settings

from wentzel_lab import _backend

settings.register_profile("default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

BACKENDS = ["pure"] + (["compiled"] if _backend.HAVE_EXTENSION else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param
