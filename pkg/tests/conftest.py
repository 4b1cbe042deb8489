"""
Pytest configuration and shared fixtures.
"""

import os

import pytest

from src.lattice import GridSpec, make_grid
from src.metricgen import conformal_metric, random_pluriclosed
from src.lattice import random_bandlimited

ISOLATED_ENV_VARS = (
    "CHERN_FLOW_OUTPUT_DIR",
    "CHERN_FLOW_LOG_DIR",
    "CHERN_FLOW_CHECKPOINT_EVERY",
    "LOG_LEVEL",
)


@pytest.fixture(autouse=True, scope="function")
def isolate_environment(tmp_path):
    """
    Point output and log directories at a temporary directory.

    Tests never write into data/ or logs/ of the project; variables set
    by a test are restored afterwards.
    """
    original = {key: os.environ.get(key) for key in ISOLATED_ENV_VARS}
    for key in ISOLATED_ENV_VARS:
        os.environ.pop(key, None)
    os.environ["CHERN_FLOW_OUTPUT_DIR"] = str(tmp_path / "out")
    os.environ["CHERN_FLOW_LOG_DIR"] = str(tmp_path / "logs")

    yield

    for key, value in original.items():
        if value is not None:
            os.environ[key] = value
        elif key in os.environ:
            del os.environ[key]


@pytest.fixture
def grid1():
    """n = 1 grid, well resolved for smooth band-limited data."""
    return make_grid(GridSpec(1, 32))


@pytest.fixture
def grid1_fine():
    return make_grid(GridSpec(1, 64))


@pytest.fixture
def grid2():
    """Smallest n = 2 grid used by the identity tests."""
    return make_grid(GridSpec(2, 16))


@pytest.fixture
def grid2_small():
    return make_grid(GridSpec(2, 8))


@pytest.fixture
def pluriclosed2(grid2):
    """Random pluriclosed non-Kähler metric with modes up to 4 on N = 16."""
    return random_pluriclosed(grid2, seed=5, amplitude=0.1, max_mode=4)


@pytest.fixture
def pluriclosed2_smooth(grid2):
    """Low-mode pluriclosed metric for flow and energy tests."""
    return random_pluriclosed(grid2, seed=5, amplitude=0.05, max_mode=1)


@pytest.fixture
def conformal1(grid1_fine):
    u = random_bandlimited(3, 0.2, 2, grid1_fine)
    return conformal_metric(grid1_fine, u)
