import numpy as np
import pytest

from kproc import Environment, env_from_weights


@pytest.fixture(scope="session")
def two_site():
    return Environment(weights=np.array([1.0, 0.5]), alpha=0.5, tail_estimate=0.0)


@pytest.fixture(scope="session")
def env21():
    return env_from_weights([2.0, 1.0])


@pytest.fixture(scope="session")
def single_site():
    return env_from_weights([1.0])
