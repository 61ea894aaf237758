import numpy as np
import pytest

from fair_alloc.arrivals import ArrivalDistribution
from fair_alloc.experiment import SPECIAL_INSTANCES


@pytest.fixture
def degenerate_dist():
    return SPECIAL_INSTANCES["degenerate"]


@pytest.fixture
def nondegenerate_dist():
    return SPECIAL_INSTANCES["nondegenerate"]


@pytest.fixture
def identity_dist():
    return ArrivalDistribution(np.eye(2), np.array([0.5, 0.5]))


def random_distribution(rng: np.random.Generator, n_types: int, n_agents: int) -> ArrivalDistribution:
    probs = rng.dirichlet(np.ones(n_types))
    support = rng.uniform(0.05, 1.0, size=(n_types, n_agents))
    return ArrivalDistribution(support, probs)


@pytest.fixture
def random_dist():
    return random_distribution(np.random.default_rng(7), 3, 3)


@pytest.fixture
def make_random_dist():
    return random_distribution
