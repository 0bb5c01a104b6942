import pytest
from hypothesis import settings

from shortops.tolerance import DEFAULT_TOL

# reproducible property runs: examples derive from the test name, not the clock
settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")


@pytest.fixture
def tol():
    return DEFAULT_TOL
