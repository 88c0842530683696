import numpy as np
import pytest

from regland.hamiltonian import Potential, gen_piecewise_potential, make_grid


def field(grid, values) -> Potential:
    return Potential(grid=grid, values=values)


@pytest.fixture
def grid3():
    return make_grid(3)


@pytest.fixture
def grid1001():
    return make_grid(1001)


@pytest.fixture
def zero_potential(grid1001):
    return field(grid1001, np.zeros(grid1001.n))


@pytest.fixture
def smooth_potential(grid1001):
    """1000·sin²(2πx)."""
    return field(grid1001, 1e3 * np.sin(2 * np.pi * grid1001.nodes) ** 2)


@pytest.fixture
def random_potential():
    """Seeded piecewise potential, coarser than the reference runs."""
    return gen_piecewise_potential(make_grid(601), 12, 4e3, seed=7)
