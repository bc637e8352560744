import numpy as np
import pytest

from analogybench import JointDistribution, Proposition, WorldSpace


@pytest.fixture
def ab_space():
    return WorldSpace(("a", "b"))


@pytest.fixture
def ab_dist(ab_space):
    # weights {a&b: 0.3, a&!b: 0.2, !a&b: 0.1, !a&!b: 0.4}; world bit 0 is a, bit 1 is b
    return JointDistribution(ab_space, [0.4, 0.2, 0.1, 0.3])


@pytest.fixture
def xyz_space():
    return WorldSpace(("x", "y", "z"))


def random_distribution(space: WorldSpace, rng: np.random.Generator) -> JointDistribution:
    return JointDistribution.from_unnormalized(
        space, rng.standard_exponential(space.world_count)
    )


def random_proposition(space: WorldSpace, rng: np.random.Generator) -> Proposition:
    mask = rng.integers(0, 2, space.world_count).astype(bool)
    return Proposition(space, mask)
