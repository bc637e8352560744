import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from analogybench import (
    JointDistribution,
    Proposition,
    SpaceMismatchError,
    UndefinedConditionalError,
    WorldSpace,
    conditional,
    entails,
    is_non_extremal,
    probability,
)
from analogybench.prob import InvalidDistributionError

from conftest import random_distribution, random_proposition


class TestWorldSpace:
    def test_world_count(self):
        assert WorldSpace(("a",)).world_count == 2
        assert WorldSpace(("a", "b", "c")).world_count == 8

    def test_rejects_duplicates_and_bad_names(self):
        with pytest.raises(ValueError):
            WorldSpace(("a", "a"))
        with pytest.raises(ValueError):
            WorldSpace(("",))
        with pytest.raises(ValueError):
            WorldSpace(("a-b",))

    def test_rejects_oversized_space(self):
        with pytest.raises(ValueError):
            WorldSpace(tuple(f"a{i}" for i in range(21)))

    def test_canonical_world_enumeration(self):
        space = WorldSpace(("a", "b"))
        # world index bit k encodes atom k
        assert space.world_description(0) == {"a": False, "b": False}
        assert space.world_description(1) == {"a": True, "b": False}
        assert space.world_description(3) == {"a": True, "b": True}


class TestProposition:
    def test_tautology_and_contradiction_extensions(self, ab_space):
        assert Proposition.tautology(ab_space).extension == frozenset(range(4))
        assert Proposition.contradiction(ab_space).extension == frozenset()

    def test_parse_unknown_atom(self, ab_space):
        with pytest.raises(ValueError, match="unknown atom"):
            Proposition.parse(ab_space, "a & q")

    def test_parse_matches_operators(self, ab_space):
        a = Proposition.atom(ab_space, "a")
        b = Proposition.atom(ab_space, "b")
        assert Proposition.parse(ab_space, "a & !b") == a & ~b
        assert Proposition.parse(ab_space, "!(a | b)") == ~(a | b)

    def test_cross_space_operations_rejected(self, ab_space):
        other = WorldSpace(("a", "c"))
        with pytest.raises(SpaceMismatchError):
            Proposition.atom(ab_space, "a") & Proposition.atom(other, "a")


class TestJointDistribution:
    def test_rejects_negative_weights(self, ab_space):
        with pytest.raises(InvalidDistributionError):
            JointDistribution(ab_space, [0.5, 0.6, -0.1, 0.0])

    def test_rejects_unnormalized(self, ab_space):
        with pytest.raises(InvalidDistributionError):
            JointDistribution(ab_space, [0.3, 0.3, 0.3, 0.3])

    def test_normalization_tolerance(self, ab_space):
        JointDistribution(ab_space, [0.25, 0.25, 0.25, 0.25 + 5e-13])


class TestProbability:
    def test_uniform_single_atom(self):
        space = WorldSpace(("a",))
        dist = JointDistribution.uniform(space)
        assert probability(dist, Proposition.atom(space, "a")) == 0.5

    def test_tautology_is_certain(self, ab_dist, ab_space):
        a = Proposition.atom(ab_space, "a")
        assert probability(ab_dist, a | ~a) == pytest.approx(1.0, abs=1e-12)

    def test_four_world_example(self, ab_dist, ab_space):
        # P(a) = 0.2 + 0.3, summing the two a-worlds by hand
        assert probability(ab_dist, Proposition.atom(ab_space, "a")) == pytest.approx(0.5)

    def test_space_mismatch(self, ab_dist):
        other = WorldSpace(("a", "c"))
        with pytest.raises(SpaceMismatchError):
            probability(ab_dist, Proposition.atom(other, "a"))


class TestConditional:
    def test_self_conditioning(self, ab_dist, ab_space):
        a = Proposition.atom(ab_space, "a")
        assert conditional(ab_dist, a, a) == pytest.approx(1.0)

    def test_four_world_example(self, ab_dist, ab_space):
        # P(a|b) = 0.3 / (0.3 + 0.1) by hand
        a = Proposition.atom(ab_space, "a")
        b = Proposition.atom(ab_space, "b")
        assert conditional(ab_dist, a, b) == pytest.approx(0.75)

    def test_independence_under_uniformity(self, ab_space):
        dist = JointDistribution.uniform(ab_space)
        a = Proposition.atom(ab_space, "a")
        b = Proposition.atom(ab_space, "b")
        assert conditional(dist, a, b) == pytest.approx(0.5)

    def test_zero_probability_condition(self, ab_space):
        dist = JointDistribution(ab_space, [1.0, 0.0, 0.0, 0.0])
        a = Proposition.atom(ab_space, "a")
        b = Proposition.atom(ab_space, "b")
        with pytest.raises(UndefinedConditionalError):
            conditional(dist, b, a)


class TestEntails:
    def test_conjunction_elimination(self, ab_space):
        a = Proposition.atom(ab_space, "a")
        b = Proposition.atom(ab_space, "b")
        assert entails(a & b, a)

    def test_disjunction_introduction(self, ab_space):
        a = Proposition.atom(ab_space, "a")
        b = Proposition.atom(ab_space, "b")
        assert entails(a, a | b)

    def test_independent_atoms_do_not_entail(self, ab_space):
        a = Proposition.atom(ab_space, "a")
        b = Proposition.atom(ab_space, "b")
        assert not entails(a, b)

    def test_space_mismatch(self, ab_space):
        other = WorldSpace(("a", "c"))
        with pytest.raises(SpaceMismatchError):
            entails(Proposition.atom(ab_space, "a"), Proposition.atom(other, "a"))


class TestNonExtremal:
    def test_uniform_atom(self, ab_space):
        dist = JointDistribution.uniform(ab_space)
        assert is_non_extremal(dist, Proposition.atom(ab_space, "a"))

    def test_tautology_is_extremal(self, ab_dist, ab_space):
        assert not is_non_extremal(ab_dist, Proposition.tautology(ab_space))

    def test_point_mass_world(self, ab_space):
        dist = JointDistribution(ab_space, [0.0, 0.0, 0.0, 1.0])
        a = Proposition.atom(ab_space, "a")
        b = Proposition.atom(ab_space, "b")
        assert not is_non_extremal(dist, a & b)

    def test_configurable_epsilon(self, ab_space):
        dist = JointDistribution(ab_space, [0.999, 0.001, 0.0, 0.0])
        a = Proposition.atom(ab_space, "a")
        assert is_non_extremal(dist, a)
        assert not is_non_extremal(dist, a, eps=0.01)


@st.composite
def space_dist_and_props(draw, n_props=2):
    n_atoms = draw(st.integers(1, 4))
    space = WorldSpace(tuple(f"p{i}" for i in range(n_atoms)))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    dist = random_distribution(space, rng)
    props = [random_proposition(space, rng) for _ in range(n_props)]
    return space, dist, props


class TestInvariants:
    @given(space_dist_and_props())
    @settings(max_examples=200, deadline=None)
    def test_additivity_for_disjoint_events(self, data):
        space, dist, (a, b) = data
        b_disjoint = b & ~a
        lhs = probability(dist, a | b_disjoint)
        rhs = probability(dist, a) + probability(dist, b_disjoint)
        assert abs(lhs - rhs) <= 1e-12

    @given(space_dist_and_props())
    @settings(max_examples=200, deadline=None)
    def test_relevance_symmetry(self, data):
        space, dist, (a, b) = data
        if not (is_non_extremal(dist, a) and is_non_extremal(dist, b)):
            return
        da = conditional(dist, a, b) - probability(dist, a)
        db = conditional(dist, b, a) - probability(dist, b)
        if abs(da) > 1e-12 or abs(db) > 1e-12:
            assert (da > 1e-12) == (db > 1e-12) or (abs(da) <= 1e-12 or abs(db) <= 1e-12)

    @given(space_dist_and_props())
    @settings(max_examples=200, deadline=None)
    def test_total_probability(self, data):
        space, dist, (a, b) = data
        pb = probability(dist, b)
        # both branches must have support (note pb can round to < 1 even when
        # !b has an empty extension)
        if probability(dist, b) <= 0.0 or probability(dist, ~b) <= 0.0:
            return
        total = conditional(dist, a, b) * pb + conditional(dist, a, ~b) * (1 - pb)
        assert abs(total - probability(dist, a)) <= 1e-10

    @given(space_dist_and_props())
    @settings(max_examples=200, deadline=None)
    def test_entailment_monotonicity(self, data):
        space, dist, (a, b) = data
        sub = a & b
        assert probability(dist, sub) <= probability(dist, a) + 1e-12
        assert probability(dist, a) <= probability(dist, a | b) + 1e-12
