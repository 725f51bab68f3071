import numpy as np
import pytest

from frontlab import Params, center_params, make_grid

REF = dict(tau_hat=4.21, theta_hat=10.0, diff_D=2.2)


@pytest.fixture(scope="session")
def ref_params() -> Params:
    """Reference setup at the organizing center, eps = 0.03."""
    return center_params(0.03)


@pytest.fixture(scope="session")
def ref_grid():
    return make_grid(10.0, 2049, 0.03)


@pytest.fixture(scope="session")
def coarse_grid():
    return make_grid(10.0, 1025, 0.03)


@pytest.fixture()
def rng():
    return np.random.default_rng(20210114)
