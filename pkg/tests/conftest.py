"""
Test configuration and fixtures for tvpinn
"""
import os
import sys

import numpy as np
import pytest
from dotenv import load_dotenv

# Add the project root to Python path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# Load environment variables
load_dotenv()

from tests.fixtures import (  # noqa: E402
    FIXTURE_PARAMS,
    fixture_simulation_config,
    small_run_config,
)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-length training experiments (set TVPINN_RUN_SLOW=1)")


def pytest_collection_modifyitems(config, items):
    if os.getenv("TVPINN_RUN_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="slow: set TVPINN_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def fixture_params():
    """Rate constants of the synthetic fixture"""
    from core.models.params import ParamSet
    return ParamSet(**FIXTURE_PARAMS)


@pytest.fixture
def simulation_config():
    return fixture_simulation_config()


@pytest.fixture(scope="session")
def oracle_trajectory():
    """RK4 ground truth of the synthetic fixture on [6, 23]"""
    from ode_model.profiles import make_profile
    from ode_model.solver import solve_rk4
    from ode_model.trajectory import SystemState

    config = fixture_simulation_config()
    s = config.initial_state
    return solve_rk4(SystemState(s.C, s.T, s.M, s.G), config.params, make_profile(config.s_mt_truth),
                     config.dosing, config.t0, config.tF, config.step)


@pytest.fixture(scope="session")
def synthetic_observations(oracle_trajectory):
    from ode_model.observations import synthesize_observations
    config = fixture_simulation_config()
    return synthesize_observations(oracle_trajectory, config.sample_days, 0.0, 0, config.anchor_days)


@pytest.fixture
def run_config(tmp_path):
    """A downsized fit configuration that trains in seconds"""
    return small_run_config(str(tmp_path / "observations.csv"))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
