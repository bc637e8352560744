from fractions import Fraction

import numpy as np
import pytest

from analogybench import (
    ConstraintSet,
    JointDistribution,
    ProbConstraint,
    Proposition,
    SearchConfig,
    Side,
    WorldSpace,
    find_model,
    grid_enumerate,
    penalty,
    sample_simplex,
)
from analogybench.finder import GridBudgetError, is_satisfied


@pytest.fixture
def a_gt_half(ab_space):
    a = Proposition.atom(ab_space, "a")
    return ConstraintSet(
        space=ab_space,
        constraints=[
            ProbConstraint(kind="prob_gt", lhs=Side(target=a), rhs=Side(const=0.5), label="pa")
        ],
    )


def schema_style_constraints(space: WorldSpace, margin: float) -> ConstraintSet:
    """The four analogy-schema conditions over atoms (h, e, b)."""
    h = Proposition.atom(space, "h")
    e = Proposition.atom(space, "e")
    b = Proposition.atom(space, "b")
    nb = ~b
    return ConstraintSet(
        space=space,
        constraints=[
            ProbConstraint("cond_gt_prob", Side(target=h, given=b), Side(target=h),
                           margin=margin, label="c1"),
            ProbConstraint("cond_gt_cond", Side(target=e, given=b), Side(target=e, given=nb),
                           margin=margin, label="c2"),
            ProbConstraint("cond_ge_cond", Side(target=h, given=b & e), Side(target=h, given=b),
                           margin=0.0, label="c3"),
            ProbConstraint("cond_ge_cond", Side(target=h, given=nb & e), Side(target=h, given=nb),
                           margin=0.0, label="c4"),
        ],
    )


class TestSampleSimplex:
    def test_valid_distribution(self, xyz_space):
        dist = sample_simplex(xyz_space, seed=0)
        assert np.all(dist.weights >= 0)
        assert dist.weights.sum() == pytest.approx(1.0, abs=1e-12)

    def test_deterministic(self, xyz_space):
        a = sample_simplex(xyz_space, seed=42)
        b = sample_simplex(xyz_space, seed=42)
        np.testing.assert_array_equal(a.weights, b.weights)
        c = sample_simplex(xyz_space, seed=43)
        assert not np.array_equal(a.weights, c.weights)

    def test_uniformity_of_coordinate_mean(self, ab_space):
        # Uniform on the 4-world simplex: each coordinate has mean 1/4.
        totals = np.zeros(4)
        n = 20_000
        for seed in range(n):
            totals += sample_simplex(ab_space, seed).weights
        np.testing.assert_allclose(totals / n, 0.25, atol=0.01)


class TestConstraintValidation:
    def test_side_needs_exactly_one_form(self):
        with pytest.raises(ValueError):
            Side()
        with pytest.raises(ValueError):
            Side(const=0.5, target=Proposition.atom(WorldSpace(("a",)), "a"))

    def test_unknown_kind_rejected(self, ab_space):
        a = Proposition.atom(ab_space, "a")
        with pytest.raises(ValueError):
            ProbConstraint(kind="prob_ge", lhs=Side(target=a), rhs=Side(const=0.5))

    def test_negative_margin_rejected(self, ab_space):
        a = Proposition.atom(ab_space, "a")
        with pytest.raises(ValueError):
            ProbConstraint(kind="prob_gt", lhs=Side(target=a), rhs=Side(const=0.5), margin=-0.1)

    def test_empty_set_rejected(self, ab_space):
        with pytest.raises(ValueError):
            ConstraintSet(space=ab_space, constraints=[])


class TestPenalty:
    def test_zero_when_satisfied(self, ab_space, a_gt_half):
        dist = JointDistribution(ab_space, [0.1, 0.5, 0.1, 0.3])
        assert penalty(dist, a_gt_half) == 0.0

    def test_squared_hinge_value(self, ab_space, a_gt_half):
        # P(a) = 0.3, shortfall vs 0.5 is 0.2, penalty 0.04
        dist = JointDistribution(ab_space, [0.4, 0.2, 0.3, 0.1])
        assert penalty(dist, a_gt_half) == pytest.approx(0.04)

    def test_undefined_conditional_fixed_penalty(self, ab_space):
        a = Proposition.atom(ab_space, "a")
        b = Proposition.atom(ab_space, "b")
        cs = ConstraintSet(
            space=ab_space,
            constraints=[
                ProbConstraint("cond_gt_prob", Side(target=a, given=b), Side(target=a))
            ],
        )
        dist = JointDistribution(ab_space, [0.5, 0.5, 0.0, 0.0])  # P(b) = 0
        assert penalty(dist, cs) == 1.0

    def test_uniform_fails_strict_schema_margins(self, xyz_space):
        space = WorldSpace(("h", "e", "b"))
        cs = schema_style_constraints(space, margin=0.05)
        dist = JointDistribution.uniform(space)
        # Both strict conditions sit at equality, 0.05 short of margin each.
        assert penalty(dist, cs) == pytest.approx(2 * 0.05**2)

    def test_equality_within_margin(self, ab_space):
        a = Proposition.atom(ab_space, "a")
        cs = ConstraintSet(
            space=ab_space,
            constraints=[
                ProbConstraint("equality", Side(target=a), Side(const=0.5), margin=0.01)
            ],
        )
        near = JointDistribution(ab_space, [0.25, 0.255, 0.245, 0.25])
        far = JointDistribution(ab_space, [0.2, 0.4, 0.1, 0.3])
        assert penalty(near, cs) == 0.0
        assert penalty(far, cs) > 0.0


class TestFindModel:
    def test_easy_constraint(self, a_gt_half):
        result = find_model(a_gt_half, SearchConfig(seed=1, max_samples=2_000))
        assert result.found
        assert result.penalty <= 1e-12
        assert result.achieved_margins["pa"] > 0.0
        assert is_satisfied(result.distribution, a_gt_half)

    def test_schema_constraints_at_margin(self):
        space = WorldSpace(("h", "e", "b"))
        cs = schema_style_constraints(space, margin=0.05)
        result = find_model(cs, SearchConfig(seed=1))
        assert result.found
        assert result.achieved_margins["c1"] >= 0.05 - 1e-12
        assert result.achieved_margins["c2"] >= 0.05 - 1e-12
        assert result.achieved_margins["c3"] >= -1e-12
        assert result.achieved_margins["c4"] >= -1e-12

    def test_contradictory_constraints_exhaust_budget(self, ab_space):
        a = Proposition.atom(ab_space, "a")
        cs = ConstraintSet(
            space=ab_space,
            constraints=[
                ProbConstraint("prob_gt", Side(target=a), Side(const=0.9), label="hi"),
                ProbConstraint("prob_lt", Side(target=a), Side(const=0.1), label="lo"),
            ],
        )
        result = find_model(cs, SearchConfig(seed=1, max_samples=2_000))
        assert not result.found
        assert result.infeasible_report
        assert result.samples_used == 2_000
        assert result.penalty > 0.0
        # best-found distribution still reported
        assert result.distribution.weights.sum() == pytest.approx(1.0)

    def test_deterministic_given_seed(self, a_gt_half):
        a = find_model(a_gt_half, SearchConfig(seed=7, max_samples=2_000))
        b = find_model(a_gt_half, SearchConfig(seed=7, max_samples=2_000))
        np.testing.assert_array_equal(a.distribution.weights, b.distribution.weights)
        assert a.penalty == b.penalty


class TestGridEnumerate:
    def test_unconstrained_counts_compositions(self):
        space = WorldSpace(("a",))
        taut = Proposition.tautology(space)
        cs = ConstraintSet(
            space=space,
            constraints=[ProbConstraint("prob_gt", Side(target=taut), Side(const=0.5))],
        )
        # tautology constraint is always satisfied: all 5 compositions of 4 into 2 parts
        assert len(grid_enumerate(cs, resolution=4)) == 5

    def test_strict_inequality_is_exact(self):
        space = WorldSpace(("a",))
        a = Proposition.atom(space, "a")
        cs = ConstraintSet(
            space=space,
            constraints=[ProbConstraint("prob_gt", Side(target=a), Side(const=0.5))],
        )
        # world order: (!a, a); P(a) > 1/2 exactly means count 3 or 4 of 4
        result = grid_enumerate(cs, resolution=4)
        assert sorted(result) == [
            [Fraction(0), Fraction(1)],
            [Fraction(1, 4), Fraction(3, 4)],
        ]

    def test_weak_inequality_includes_boundary(self):
        space = WorldSpace(("a",))
        a = Proposition.atom(space, "a")
        taut = Proposition.tautology(space)
        cs = ConstraintSet(
            space=space,
            constraints=[
                ProbConstraint("cond_ge_cond", Side(target=a, given=taut),
                               Side(const=0.5))
            ],
        )
        result = grid_enumerate(cs, resolution=4)
        assert [Fraction(1, 2), Fraction(1, 2)] in result
        assert len(result) == 3

    def test_grid_solutions_have_zero_penalty(self, ab_space):
        a = Proposition.atom(ab_space, "a")
        b = Proposition.atom(ab_space, "b")
        cs = ConstraintSet(
            space=ab_space,
            constraints=[
                ProbConstraint("cond_gt_prob", Side(target=a, given=b), Side(target=a),
                               label="rel"),
            ],
        )
        points = grid_enumerate(cs, resolution=6)
        assert points
        for point in points:
            dist = JointDistribution(ab_space, [float(f) for f in point])
            assert penalty(dist, cs) == 0.0

    def test_budget_refusals(self, ab_space):
        big = WorldSpace(tuple(f"a{i}" for i in range(4)))  # 16 worlds
        taut = Proposition.tautology(big)
        cs = ConstraintSet(
            space=big,
            constraints=[ProbConstraint("prob_gt", Side(target=taut), Side(const=0.5))],
        )
        with pytest.raises(GridBudgetError):
            grid_enumerate(cs, resolution=4)
        a = Proposition.atom(ab_space, "a")
        small = ConstraintSet(
            space=ab_space,
            constraints=[ProbConstraint("prob_gt", Side(target=a), Side(const=0.5))],
        )
        with pytest.raises(GridBudgetError):
            grid_enumerate(small, resolution=21)
        with pytest.raises(GridBudgetError):
            grid_enumerate(small, resolution=0)
