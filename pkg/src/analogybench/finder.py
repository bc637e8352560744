"""Feasibility search over the probability simplex.

Finds joint distributions satisfying conditional-probability inequality
constraints at requested margins, via seeded random restarts plus
derivative-free coordinate descent on the world weights. A small exact
rational grid enumerator backs the search as an independent oracle.

Infeasibility is only ever reported as budget exhaustion, never as a proof.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .prob import (
    JointDistribution,
    Proposition,
    SpaceMismatchError,
    WorldSpace,
)

#: Penalty contributed by a constraint whose conditional is undefined.
UNDEFINED_PENALTY = 1.0

#: Slack for float satisfaction checks at constraint boundaries.
BOUNDARY_TOLERANCE = 1e-12

STRICT_KINDS = frozenset({"prob_gt", "prob_lt", "cond_gt_cond", "cond_gt_prob"})
WEAK_KINDS = frozenset({"cond_ge_cond"})
ALL_KINDS = STRICT_KINDS | WEAK_KINDS | {"equality"}


@dataclass(frozen=True)
class Side:
    """One side of a constraint: a constant, P(target), or P(target|given)."""

    const: float | None = None
    target: Proposition | None = None
    given: Proposition | None = None

    def __post_init__(self):
        if (self.const is None) == (self.target is None):
            raise ValueError("a side is either a constant or a (target, given?) query")

    @property
    def is_const(self) -> bool:
        return self.const is not None


@dataclass(frozen=True)
class ProbConstraint:
    kind: str
    lhs: Side
    rhs: Side
    margin: float = 0.0
    label: str | None = None

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.margin < 0:
            raise ValueError("constraint margin must be >= 0")


@dataclass(frozen=True)
class ConstraintSet:
    space: WorldSpace
    constraints: tuple[ProbConstraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if not self.constraints:
            raise ValueError("constraint set must be nonempty")
        for c in self.constraints:
            for side in (c.lhs, c.rhs):
                for prop in (side.target, side.given):
                    if prop is not None and prop.space != self.space:
                        raise SpaceMismatchError(
                            "constraint proposition defined over a different space"
                        )


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 1
    max_samples: int = 100_000
    refine_steps: int = 60
    penalty_tolerance: float = 1e-12
    grid_resolution: int | None = None
    batch_size: int = 512

    def __post_init__(self):
        if self.max_samples < 1:
            raise ValueError("max_samples must be >= 1")
        if self.penalty_tolerance <= 0:
            raise ValueError("penalty_tolerance must be > 0")


@dataclass(frozen=True)
class FindModelResult:
    found: bool
    distribution: JointDistribution  # best-found even when not found
    penalty: float
    achieved_margins: dict[str, float]
    samples_used: int
    restarts_refined: int
    seed: int

    @property
    def infeasible_report(self) -> bool:
        return not self.found


def sample_simplex(space: WorldSpace, seed: int) -> JointDistribution:
    """Uniform draw from the simplex: normalized i.i.d. standard exponentials."""
    rng = np.random.default_rng(seed)
    raw = rng.standard_exponential(space.world_count)
    return JointDistribution.from_unnormalized(space, raw)


def _side_vectors(side: Side, n: int):
    """Numerator/denominator mask vectors so value = (w@num)/(w@den) (den=None → 1)."""
    if side.is_const:
        return None
    target = side.target.mask.astype(np.float64)
    if side.given is None:
        return target, None
    given = side.given.mask.astype(np.float64)
    return target * given, given


class _CompiledConstraints:
    """Constraint set lowered to mask vectors for scalar and batch evaluation."""

    def __init__(self, cs: ConstraintSet):
        self.cs = cs
        n = cs.space.world_count
        self.entries = []
        for c in cs.constraints:
            self.entries.append((c, _side_vectors(c.lhs, n), _side_vectors(c.rhs, n)))

    def side_values(self, w: np.ndarray):
        """Per-constraint (lhs, rhs) values for one weight vector; nan when undefined."""
        out = []
        for c, lv, rv in self.entries:
            out.append((_eval_side(w, c.lhs, lv), _eval_side(w, c.rhs, rv)))
        return out

    def achieved_margins(self, w: np.ndarray) -> list[float]:
        """Achieved margin per constraint (see _achieved); nan when undefined."""
        return [
            _achieved(c.kind, lhs, rhs)
            for (c, _, _), (lhs, rhs) in zip(self.entries, self.side_values(w))
        ]

    def penalty(self, w: np.ndarray) -> float:
        total = 0.0
        for (c, _, _), achieved in zip(self.entries, self.achieved_margins(w)):
            if np.isnan(achieved):
                total += UNDEFINED_PENALTY
            else:
                total += max(0.0, _required(c) - achieved) ** 2
        return total

    def penalty_batch(self, weights: np.ndarray) -> np.ndarray:
        """Vectorized penalty over a (n_samples, world_count) weight matrix."""
        total = np.zeros(weights.shape[0])
        with np.errstate(divide="ignore", invalid="ignore"):
            for c, lv, rv in self.entries:
                lhs = _eval_side_batch(weights, c.lhs, lv)
                rhs = _eval_side_batch(weights, c.rhs, rv)
                if c.kind == "equality":
                    achieved = -np.abs(lhs - rhs)
                    hinge = np.maximum(0.0, -c.margin - achieved)
                elif c.kind == "prob_lt":
                    achieved = rhs - lhs
                    hinge = np.maximum(0.0, c.margin - achieved)
                else:
                    achieved = lhs - rhs
                    hinge = np.maximum(0.0, c.margin - achieved)
                contrib = hinge**2
                contrib = np.where(np.isnan(achieved), UNDEFINED_PENALTY, contrib)
                total += contrib
        return total

    def satisfied(self, w: np.ndarray) -> bool:
        for (c, _, _), achieved in zip(self.entries, self.achieved_margins(w)):
            if np.isnan(achieved):
                return False
            if achieved < _required(c) - BOUNDARY_TOLERANCE:
                return False
        return True


def _required(c: ProbConstraint) -> float:
    """Required achieved margin: -m for equality (|lhs-rhs| <= m), m otherwise."""
    return -c.margin if c.kind == "equality" else c.margin


def _eval_side(w: np.ndarray, side: Side, vectors) -> float:
    if side.is_const:
        return float(side.const)
    num, den = vectors
    if den is None:
        return float(w @ num)
    d = float(w @ den)
    if d <= 0.0:
        return float("nan")
    return float(w @ num) / d


def _eval_side_batch(weights: np.ndarray, side: Side, vectors) -> np.ndarray:
    if side.is_const:
        return np.full(weights.shape[0], float(side.const))
    num, den = vectors
    if den is None:
        return weights @ num
    d = weights @ den
    return np.where(d > 0.0, (weights @ num) / np.where(d > 0.0, d, 1.0), np.nan)


def _achieved(kind: str, lhs: float, rhs: float) -> float:
    """Signed slack of a constraint; satisfied at margin m iff achieved >= m.

    equality constraints use achieved = -|lhs - rhs| against margin -m, i.e.
    they are satisfied iff |lhs - rhs| <= m.
    """
    if np.isnan(lhs) or np.isnan(rhs):
        return float("nan")
    if kind == "equality":
        return -abs(lhs - rhs)
    if kind == "prob_lt":
        return rhs - lhs
    return lhs - rhs


def penalty(dist: JointDistribution, cs: ConstraintSet) -> float:
    """Sum of squared hinge violations; zero iff every constraint holds at its margin."""
    if dist.space != cs.space:
        raise SpaceMismatchError("distribution and constraint set use different spaces")
    return _CompiledConstraints(cs).penalty(dist.weights)


def achieved_margins(dist: JointDistribution, cs: ConstraintSet) -> dict[str, float]:
    compiled = _CompiledConstraints(cs)
    values = compiled.achieved_margins(dist.weights)
    out = {}
    for i, (c, v) in enumerate(zip(cs.constraints, values)):
        out[c.label or f"c{i}"] = v
    return out


def is_satisfied(dist: JointDistribution, cs: ConstraintSet) -> bool:
    """Exact float re-evaluation: every constraint at its margin (equality within it)."""
    return _CompiledConstraints(cs).satisfied(dist.weights)


def _coordinate_descent(
    w: np.ndarray, compiled: _CompiledConstraints, steps: int
) -> tuple[np.ndarray, float]:
    """Multiplicative coordinate perturbation with renormalization after each move."""
    w = w / w.sum()
    best = compiled.penalty(w)
    delta = 0.5
    for _ in range(steps):
        improved = False
        for i in range(w.shape[0]):
            for factor in (1.0 + delta, 1.0 / (1.0 + delta)):
                cand = w.copy()
                cand[i] *= factor
                cand /= cand.sum()
                p = compiled.penalty(cand)
                if p < best:
                    best = p
                    w = cand
                    improved = True
        if best == 0.0:
            break
        if not improved:
            delta *= 0.5
            if delta < 1e-7:
                break
    return w, best


def find_model(cs: ConstraintSet, config: SearchConfig) -> FindModelResult:
    """Seeded random restarts + coordinate descent; deterministic given the seed.

    Returns found=False after budget exhaustion, carrying the best-found
    penalty and distribution (signals "not found within budget", never proven
    infeasibility). The best penalty is non-increasing over the run.
    """
    compiled = _CompiledConstraints(cs)
    rng = np.random.default_rng(config.seed)
    n = cs.space.world_count

    best_w: np.ndarray | None = None
    best_penalty = float("inf")
    samples_used = 0
    restarts_refined = 0

    while samples_used < config.max_samples:
        count = min(config.batch_size, config.max_samples - samples_used)
        raw = rng.standard_exponential((count, n))
        weights = raw / raw.sum(axis=1, keepdims=True)
        penalties = compiled.penalty_batch(weights)
        samples_used += count

        idx = int(np.argmin(penalties))
        if penalties[idx] < best_penalty:
            refined, refined_penalty = _coordinate_descent(
                weights[idx], compiled, config.refine_steps
            )
            restarts_refined += 1
            if refined_penalty < best_penalty:
                best_penalty = refined_penalty
                best_w = refined
        if (
            best_w is not None
            and best_penalty <= config.penalty_tolerance
            and compiled.satisfied(best_w)
        ):
            break

    if best_w is None:  # pragma: no cover - max_samples >= 1 guarantees a sample
        best_w = np.full(n, 1.0 / n)
        best_penalty = compiled.penalty(best_w)
    dist = JointDistribution.from_unnormalized(cs.space, best_w)
    found = best_penalty <= config.penalty_tolerance and compiled.satisfied(best_w)
    return FindModelResult(
        found=found,
        distribution=dist,
        penalty=best_penalty,
        achieved_margins=achieved_margins(dist, cs),
        samples_used=samples_used,
        restarts_refined=restarts_refined,
        seed=config.seed,
    )


class GridBudgetError(ValueError):
    """grid_enumerate refused an over-budget space or resolution."""


MAX_GRID_WORLDS = 8
MAX_GRID_RESOLUTION = 20


def _compositions(total: int, parts: int):
    """All tuples of nonnegative ints of length `parts` summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def _exact_side(side: Side, counts: tuple[int, ...], resolution: int) -> Fraction | None:
    """Exact side value over integer grid weights; None when undefined."""
    if side.is_const:
        return Fraction(side.const)
    t_idx = np.flatnonzero(side.target.mask)
    if side.given is None:
        return Fraction(sum(counts[i] for i in t_idx), resolution)
    g_idx = np.flatnonzero(side.given.mask)
    den = sum(counts[i] for i in g_idx)
    if den == 0:
        return None
    num = sum(counts[i] for i in np.flatnonzero(side.target.mask & side.given.mask))
    return Fraction(num, den)


def _exact_satisfied(c: ProbConstraint, counts: tuple[int, ...], resolution: int) -> bool:
    lhs = _exact_side(c.lhs, counts, resolution)
    rhs = _exact_side(c.rhs, counts, resolution)
    if lhs is None or rhs is None:
        return False
    m = Fraction(c.margin)
    if c.kind == "equality":
        return abs(lhs - rhs) <= m
    if c.kind == "prob_lt":
        return rhs - lhs > m
    if c.kind in WEAK_KINDS:
        return lhs - rhs >= m
    return lhs - rhs > m  # strict kinds


def grid_enumerate(cs: ConstraintSet, resolution: int) -> list[list[Fraction]]:
    """Enumerate all rational weight vectors k/resolution satisfying cs, exactly.

    Strict kinds are judged with exact strict inequality, weak kinds with >=,
    equality within its margin. Restricted to small spaces and resolutions.
    """
    n = cs.space.world_count
    if n > MAX_GRID_WORLDS:
        raise GridBudgetError(f"grid enumeration limited to {MAX_GRID_WORLDS} worlds")
    if resolution > MAX_GRID_RESOLUTION or resolution < 1:
        raise GridBudgetError(
            f"grid resolution must be in [1, {MAX_GRID_RESOLUTION}]"
        )
    # Precompute index sets once; _exact_side recomputes them cheaply via masks.
    satisfying = []
    for counts in _compositions(resolution, n):
        if all(_exact_satisfied(c, counts, resolution) for c in cs.constraints):
            satisfying.append([Fraction(k, resolution) for k in counts])
    return satisfying
