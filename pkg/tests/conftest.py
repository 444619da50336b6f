import pytest

from src.config import SolverOptions
from src.utils.exponent_atlas import make_params
from src.utils.heteroclinic_solver import shoot_heteroclinic


@pytest.fixture(scope='session')
def opts():
    return SolverOptions()


@pytest.fixture(scope='session')
def stable_params():
    # node attractor: alpha_star = -3, -8 and x_eq = sqrt(12)
    return make_params(15, 6.5, 3.0)


@pytest.fixture(scope='session')
def spiral_params():
    # focus attractor: alpha_star = -1 +- 2i
    return make_params(5, 1.5, 5.0)


@pytest.fixture(scope='session')
def stable_traj(stable_params, opts):
    return shoot_heteroclinic(stable_params, opts)


@pytest.fixture(scope='session')
def spiral_traj(spiral_params, opts):
    return shoot_heteroclinic(spiral_params, opts)
