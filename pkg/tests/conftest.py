import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gowerslab.instances import (
    grid_sphere,
    mathias_silver,
    projective_rosendal,
    rosendal,
    single_subspace,
)


@pytest.fixture(scope="session")
def ms6():
    return mathias_silver(6, 2, 1)


@pytest.fixture(scope="session")
def ms6_min1():
    return mathias_silver(6, 1, 1)


@pytest.fixture(scope="session")
def ms8():
    return mathias_silver(8, 2, 1)


@pytest.fixture(scope="session")
def ms8_tail():
    # Large-minimum palette: the one used for the doubled-game pipelines.
    return mathias_silver(8, 6, 1)


@pytest.fixture(scope="session")
def ms10():
    return mathias_silver(10, 2, 1)


@pytest.fixture(scope="session")
def ms12():
    return mathias_silver(12, 2, 1)


@pytest.fixture(scope="session")
def f2d3():
    return rosendal(2, 3, 1)


@pytest.fixture(scope="session")
def f2d4():
    return rosendal(2, 4, 1)


@pytest.fixture(scope="session")
def f3d4():
    return rosendal(3, 4, 1)


@pytest.fixture(scope="session")
def proj3d4():
    return projective_rosendal(3, 4, 1)


@pytest.fixture(scope="session")
def grid_quarter():
    return grid_sphere(2, "1/4", 1)


@pytest.fixture(scope="session")
def grid_half():
    return grid_sphere(2, "1/2", 1)


@pytest.fixture(scope="session")
def degenerate():
    return single_subspace(2)
