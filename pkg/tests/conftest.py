import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from windext.spectral import BoundaryFunction, CircleGrid

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def grid():
    return CircleGrid(2048)


@pytest.fixture
def sample(grid):
    def _sample(fn):
        return BoundaryFunction.sample(fn, grid)

    return _sample


def random_band_limited(rng, grid, M=12):
    """Random trigonometric polynomial with |c_k| decaying like 1/(1+|k|)^2."""
    k = np.arange(-M, M + 1)
    c = (rng.standard_normal(k.size) + 1j * rng.standard_normal(k.size)) / (1 + np.abs(k)) ** 2
    z = grid.z
    return BoundaryFunction(grid, sum(ck * z ** int(kk) for kk, ck in zip(k, c)))


ACCEPTANCE_LINES: list[str] = []
SESSION_START: list[float] = []


def pytest_sessionstart(session):
    import time

    SESSION_START.append(time.perf_counter())


def pytest_collection_modifyitems(session, config, items):
    # acceptance runs last so the wall-clock criterion sees the whole session
    items.sort(key=lambda item: item.nodeid.startswith("tests/test_acceptance.py")
               or "test_acceptance.py" in item.nodeid)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
