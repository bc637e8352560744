"""Bayesian confirmation verdicts and the transitivity-of-confirmation checker.

Confirmation is incremental: evidence E confirms hypothesis H when
P(H|E) > P(H). Confirmation is not transitive in general; the checker here
evaluates a sufficient condition set for transitivity over a chain X -> Y -> Z:

    (i)   P(Z|Y)      > P(Z)
    (ii)  P(X|Y)      > P(X|!Y)
    (iii) P(Z|X & Y)  >= P(Z|Y)
    (iv)  P(Z|X & !Y) >= P(Z|!Y)
    =>    P(Z|X)      > P(Z)

In the limiting case in which Y entails Z, (ii) and (iv) alone suffice.
The counterexample miner searches for naive-transitivity failures:
X confirms Y, Y confirms Z, yet X disconfirms Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .prob import (
    JointDistribution,
    Proposition,
    UndefinedConditionalError,
    WorldSpace,
    conditional,
    entails,
    probability,
)

#: Slack for the weak (>=) conditions: float comparisons at exact equality
#: must not produce spurious failures.
WEAK_TOLERANCE = 1e-12

#: Margins at which mined counterexamples must hold, so that they survive
#: independent re-computation comfortably clear of float noise.
MINER_CONFIRM_MARGIN = 0.01
MINER_DISCONFIRM_MARGIN = 0.001


@dataclass(frozen=True)
class ConfirmationVerdict:
    confirms: bool
    degree: float  # difference measure P(h|e) - P(h)
    measure_values: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class ConditionResult:
    holds: bool
    margin: float  # nan when inapplicable
    applicable: bool = True
    at_boundary: bool = False  # |margin| within WEAK_TOLERANCE of exact equality


_INAPPLICABLE = ConditionResult(holds=False, margin=float("nan"), applicable=False)


@dataclass(frozen=True)
class TransitivityReport:
    cond_i: ConditionResult
    cond_ii: ConditionResult
    cond_iii: ConditionResult
    cond_iv: ConditionResult
    conclusion: ConditionResult
    corollary_mode: bool = False
    #: The conclusion is judged as strictly-greater: P(Z|X) > P(Z).
    conclusion_direction: str = "greater"

    @property
    def antecedent_holds(self) -> bool:
        if self.corollary_mode:
            return self.cond_ii.holds and self.cond_iv.holds
        return (
            self.cond_i.holds
            and self.cond_ii.holds
            and self.cond_iii.holds
            and self.cond_iv.holds
        )

    @property
    def conditions(self) -> dict[str, ConditionResult]:
        return {
            "i": self.cond_i,
            "ii": self.cond_ii,
            "iii": self.cond_iii,
            "iv": self.cond_iv,
        }


def confirm(
    dist: JointDistribution,
    evidence: Proposition,
    hypothesis: Proposition,
    margin: float = 0.0,
) -> ConfirmationVerdict:
    """Judge whether evidence confirms hypothesis, with named measures.

    Raises UndefinedConditionalError when the evidence has zero probability.
    """
    posterior = conditional(dist, hypothesis, evidence)
    prior = probability(dist, hypothesis)
    degree = posterior - prior
    measures: dict[str, float] = {"difference": degree}
    if prior > 0.0:
        measures["ratio"] = posterior / prior
    # log-likelihood measure log[P(e|h) / P(e|!h)], when both sides are defined
    try:
        like = conditional(dist, evidence, hypothesis)
        unlike = conditional(dist, evidence, ~hypothesis)
        if like > 0.0 and unlike > 0.0:
            measures["log_likelihood"] = math.log(like / unlike)
    except UndefinedConditionalError:
        pass
    return ConfirmationVerdict(confirms=degree > margin, degree=degree, measure_values=measures)


def _strict_condition(margin_value: float, margin: float) -> ConditionResult:
    return ConditionResult(
        holds=margin_value > margin,
        margin=margin_value,
        at_boundary=abs(margin_value) <= WEAK_TOLERANCE,
    )


def _weak_condition(margin_value: float) -> ConditionResult:
    return ConditionResult(
        holds=margin_value >= -WEAK_TOLERANCE,
        margin=margin_value,
        at_boundary=abs(margin_value) <= WEAK_TOLERANCE,
    )


def check_transitivity(
    dist: JointDistribution,
    x: Proposition,
    y: Proposition,
    z: Proposition,
    margin: float = 0.0,
    corollary_mode: bool = False,
) -> TransitivityReport:
    """Evaluate the four transitivity conditions and the conclusion.

    (i) and (ii) are strict (judged against `margin`); (iii) and (iv) are weak
    (>=, with WEAK_TOLERANCE slack). Conditions whose conditionals are
    undefined are reported inapplicable, never silently true.
    """
    not_y = ~y
    try:
        cond_i = _strict_condition(conditional(dist, z, y) - probability(dist, z), margin)
    except UndefinedConditionalError:
        cond_i = _INAPPLICABLE
    try:
        cond_ii = _strict_condition(
            conditional(dist, x, y) - conditional(dist, x, not_y), margin
        )
    except UndefinedConditionalError:
        cond_ii = _INAPPLICABLE
    try:
        cond_iii = _weak_condition(
            conditional(dist, z, x & y) - conditional(dist, z, y)
        )
    except UndefinedConditionalError:
        cond_iii = _INAPPLICABLE
    try:
        cond_iv = _weak_condition(
            conditional(dist, z, x & not_y) - conditional(dist, z, not_y)
        )
    except UndefinedConditionalError:
        cond_iv = _INAPPLICABLE
    try:
        concl_margin = conditional(dist, z, x) - probability(dist, z)
        conclusion = ConditionResult(
            holds=concl_margin > 0.0,
            margin=concl_margin,
            at_boundary=abs(concl_margin) <= WEAK_TOLERANCE,
        )
    except UndefinedConditionalError:
        conclusion = _INAPPLICABLE
    return TransitivityReport(
        cond_i=cond_i,
        cond_ii=cond_ii,
        cond_iii=cond_iii,
        cond_iv=cond_iv,
        conclusion=conclusion,
        corollary_mode=corollary_mode,
    )


class EntailmentPreconditionError(ValueError):
    """check_corollary requires y to entail z."""


def check_corollary(
    dist: JointDistribution,
    x: Proposition,
    y: Proposition,
    z: Proposition,
    margin: float = 0.0,
) -> TransitivityReport:
    """Limiting case in which y entails z: only (ii) and (iv) are decision-relevant."""
    if not entails(y, z):
        raise EntailmentPreconditionError("corollary check requires y to entail z")
    return check_transitivity(dist, x, y, z, margin=margin, corollary_mode=True)


@dataclass(frozen=True)
class Counterexample:
    distribution: JointDistribution
    x: Proposition
    y: Proposition
    z: Proposition
    samples_used: int

    def verify(self) -> bool:
        """Independent re-computation of all three confirmation relations."""
        d = self.distribution
        first = confirm(d, self.x, self.y, MINER_CONFIRM_MARGIN)
        second = confirm(d, self.y, self.z, MINER_CONFIRM_MARGIN)
        final = conditional(d, self.z, self.x) - probability(d, self.z)
        return first.confirms and second.confirms and final < -MINER_DISCONFIRM_MARGIN


def _atom_masks(space: WorldSpace) -> np.ndarray:
    return np.stack([space.atom_mask(a).astype(np.float64) for a in space.atoms])


def mine_naive_transitivity_counterexample(
    seed: int, budget: int
) -> Counterexample | None:
    """Search random 3-atom distributions for a naive-transitivity failure.

    Looks for atoms A, B, C with P(B|A) > P(B) + 0.01, P(C|B) > P(C) + 0.01
    and P(C|A) < P(C) - 0.001. Deterministic given the seed; returns None when
    the budget is exhausted (insufficient budget, not impossibility).
    """
    if budget <= 0:
        return None
    space = WorldSpace(("A", "B", "C"))
    a_mask, b_mask, c_mask = _atom_masks(space)
    rng = np.random.default_rng(seed)
    raw = rng.standard_exponential((budget, space.world_count))
    weights = raw / raw.sum(axis=1, keepdims=True)

    p_a = weights @ a_mask
    p_b = weights @ b_mask
    p_c = weights @ c_mask
    p_ab = weights @ (a_mask * b_mask)
    p_bc = weights @ (b_mask * c_mask)
    p_ac = weights @ (a_mask * c_mask)

    with np.errstate(divide="ignore", invalid="ignore"):
        ok = (
            (p_ab / p_a - p_b > MINER_CONFIRM_MARGIN)
            & (p_bc / p_b - p_c > MINER_CONFIRM_MARGIN)
            & (p_ac / p_a - p_c < -MINER_DISCONFIRM_MARGIN)
        )
    hits = np.flatnonzero(ok)
    for idx in hits:
        candidate = Counterexample(
            distribution=JointDistribution.from_unnormalized(space, weights[idx]),
            x=Proposition.atom(space, "A"),
            y=Proposition.atom(space, "B"),
            z=Proposition.atom(space, "C"),
            samples_used=int(idx) + 1,
        )
        if candidate.verify():
            return candidate
    return None


@dataclass(frozen=True)
class FuzzReport:
    samples: int
    filtered: int
    violations: int
    reverified: int
    min_conclusion_margin: float


def fuzz_transitivity(samples: int, seed: int, margin: float, reverify_cap: int = 500) -> FuzzReport:
    """Sample 3-atom distributions, filter those satisfying (i)-(iv), verify (v).

    The filter and conclusion check are vectorized; up to `reverify_cap`
    filtered cases are additionally re-checked through the scalar
    check_transitivity path as an independent cross-check.
    """
    space = WorldSpace(("X", "Y", "Z"))
    x_mask, y_mask, z_mask = _atom_masks(space)
    ny_mask = 1.0 - y_mask
    rng = np.random.default_rng(seed)
    raw = rng.standard_exponential((samples, space.world_count))
    weights = raw / raw.sum(axis=1, keepdims=True)

    p_y = weights @ y_mask
    p_ny = weights @ ny_mask
    p_x = weights @ x_mask
    p_z = weights @ z_mask
    p_zy = weights @ (z_mask * y_mask)
    p_xy = weights @ (x_mask * y_mask)
    p_xny = weights @ (x_mask * ny_mask)
    p_zxy = weights @ (z_mask * x_mask * y_mask)
    p_zxny = weights @ (z_mask * x_mask * ny_mask)
    p_zny = weights @ (z_mask * ny_mask)
    p_zx = weights @ (z_mask * x_mask)

    with np.errstate(divide="ignore", invalid="ignore"):
        defined = (p_y > 0) & (p_ny > 0) & (p_x > 0) & (p_xy > 0) & (p_xny > 0)
        m_i = p_zy / p_y - p_z
        m_ii = p_xy / p_y - p_xny / p_ny
        m_iii = p_zxy / p_xy - p_zy / p_y
        m_iv = p_zxny / p_xny - p_zny / p_ny
        m_v = p_zx / p_x - p_z
        antecedent = defined & (m_i > margin) & (m_ii > margin) & (m_iii >= 0) & (m_iv >= 0)

    filtered_idx = np.flatnonzero(antecedent)
    violations = int(np.count_nonzero(m_v[filtered_idx] <= 0.0))
    min_margin = float(m_v[filtered_idx].min()) if filtered_idx.size else float("nan")

    x = Proposition.atom(space, "X")
    y = Proposition.atom(space, "Y")
    z = Proposition.atom(space, "Z")
    reverified = 0
    for idx in filtered_idx[:reverify_cap]:
        dist = JointDistribution.from_unnormalized(space, weights[idx])
        report = check_transitivity(dist, x, y, z, margin=margin)
        if report.antecedent_holds and report.conclusion.holds:
            reverified += 1
    return FuzzReport(
        samples=samples,
        filtered=int(filtered_idx.size),
        violations=violations,
        reverified=reverified,
        min_conclusion_margin=min_margin,
    )
