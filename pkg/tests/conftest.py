import numpy as np
import pytest

from besovlab.initial_data import make_bump
from besovlab.littlewood_paley import build_partition
from besovlab.spectral_core import Grid

ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def small_grid():
    """xi_max ~ 100, j_max = 5; long enough for the bump."""
    return Grid(512.0, 2**14)


@pytest.fixture(scope="session")
def small_partition(small_grid):
    return build_partition(small_grid)


@pytest.fixture(scope="session")
def small_bump(small_grid):
    return make_bump(small_grid)


@pytest.fixture(scope="session")
def tiny_grid():
    return Grid(2 * np.pi, 256)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_log(request):
    """Collects one PASS/FAIL line per acceptance criterion for the summary."""
    stash = request.config.stash
    if ACCEPTANCE_KEY not in stash:
        stash[ACCEPTANCE_KEY] = []
    return stash[ACCEPTANCE_KEY]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
