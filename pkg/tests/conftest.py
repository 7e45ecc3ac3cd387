import pytest
from hypothesis import HealthCheck, settings

from rdskit import _kernels

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(params=["numpy", "numba"])
def backend(request):
    """Run a test once per kernel backend."""
    if request.param == "numba" and not _kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    prev = _kernels.use_backend(request.param)
    yield request.param
    _kernels.use_backend(prev)


# designs used across modules; every one is checked where it is built
SMALL_LIFTS = [
    # (q, vector dim d, n, inequivalent lifts)
    (2, 3, 2, 1),
    (3, 3, 2, 2),
    (4, 3, 6, 1),
    (2, 5, 2, 2),
    (5, 3, 4, 2),
    (3, 4, 2, 3),
]


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
