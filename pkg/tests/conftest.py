import numpy as np
import pytest

from covariant_lab import heisenberg as hg
from covariant_lab.covariant import heisenberg_handle, su11_handle


@pytest.fixture(scope="session")
def planck():
    return hg.PlanckParams()


@pytest.fixture(scope="session")
def state_grid():
    return hg.default_state_grid()


@pytest.fixture(scope="session")
def heis_handle(planck, state_grid):
    return heisenberg_handle(planck, state_grid)


@pytest.fixture(scope="session")
def disk_handle():
    return su11_handle()


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
