import numpy as np
import pytest

from boltdev.constants import default_silicon
from boltdev.mesh import PhaseGrid, build_axis, uniform_axis


@pytest.fixture(scope="session")
def const():
    return default_silicon()


@pytest.fixture(scope="session")
def toy_grid_1d():
    """Small nonuniform (x, w, mu) grid exercising unequal cell widths."""
    return PhaseGrid(
        kind="diode",
        x=build_axis([(0.0, 0.4, 0.2), (0.4, 1.0, 0.3)]),
        w=build_axis([(0.0, 1.0, 0.5), (1.0, 6.0, 2.5)]),
        mu=build_axis([(-1.0, 0.5, 0.75), (0.5, 1.0, 0.25)]),
    )


@pytest.fixture(scope="session")
def toy_grid_2d():
    return PhaseGrid(
        kind="mosfet",
        x=uniform_axis(0.0, 0.2, 2),
        y=uniform_axis(0.0, 0.1, 2),
        w=build_axis([(0.0, 1.0, 0.5), (1.0, 5.0, 2.0)]),
        mu=uniform_axis(-1.0, 1.0, 2),
        phi=uniform_axis(0.0, np.pi, 2),
        oxide_y=uniform_axis(0.1, 0.12, 1),
    )


def rng(seed=0):
    return np.random.RandomState(seed)
