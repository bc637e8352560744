"""Parameter sweeps over scenarios: forced bridge marginals and condition margins.

A bridge-prior sweep re-solves the scenario with the bridge atom's marginal
pinned to each grid value. At an extremal value the analogy channel is
degenerate: conditions that condition on the dead branch become inapplicable,
and at value 0 the remaining weak condition is enforced at equality, which
forces the direct confirmation degree to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .finder import (
    ConstraintSet,
    ProbConstraint,
    SearchConfig,
    Side,
    find_model,
    is_satisfied,
)
from .prob import JointDistribution, Proposition
from .scenarios import Scenario, SchemaReport, evaluate_schema

#: Equality slack used during the solve; the exact value is restored by a
#: post-hoc block rescaling, which leaves all within-block conditionals intact.
SOLVE_EQUALITY_SLACK = 1e-3


@dataclass(frozen=True)
class SweepRow:
    value: float
    status: str  # "ok" | "infeasible"
    condition_margins: dict[str, float]  # nan = inapplicable
    degree: float | None
    schema_confirms: bool | None


def sweep_values(lo: float, hi: float, step: float) -> list[float]:
    """Grid lo, lo+step, ... capped at hi; a step larger than the range gives [lo]."""
    if step <= 0:
        raise ValueError("sweep step must be positive")
    values = []
    v = lo
    while v <= hi + 1e-12:
        values.append(round(v, 12))
        v += step
    return values or [lo]


def _bridge_atom(scenario: Scenario) -> str:
    bridge = scenario.roles["bridge"]
    for name in scenario.space.atoms:
        if np.array_equal(bridge.mask, scenario.space.atom_mask(name)):
            return name
    raise ValueError("bridge-prior sweeps need the bridge role to be a single atom")


def _depends_on(mask: np.ndarray, k: int) -> bool:
    """Whether a proposition's truth value depends on atom k."""
    idx = np.arange(mask.shape[0])
    return bool(np.any(mask[idx] != mask[idx ^ (1 << k)]))


def _constraint_mentions_atom(c: ProbConstraint, k: int) -> bool:
    for side in (c.lhs, c.rhs):
        for prop in (side.target, side.given):
            if prop is not None and _depends_on(prop.mask, k):
                return True
    return False


def _row_from_report(value: float, status: str, report: SchemaReport | None) -> SweepRow:
    if report is None:
        return SweepRow(value, status, {}, None, None)
    return SweepRow(
        value=value,
        status=status,
        condition_margins={k: c.margin for k, c in report.conditions.items()},
        degree=None if report.overall is None else report.overall.degree,
        schema_confirms=report.schema_confirms,
    )


def _degenerate_endpoint(scenario: Scenario, bridge_mask: np.ndarray, value: float) -> SweepRow:
    """Extremal bridge prior: uniform over the live block.

    Uniformity makes hypothesis and evidence independent within the block, so
    the surviving weak condition holds at exact equality and the direct
    confirmation degree is exactly zero.
    """
    live = bridge_mask if value == 1.0 else ~bridge_mask
    weights = live.astype(np.float64)
    dist = JointDistribution.from_unnormalized(scenario.space, weights)
    report = evaluate_schema(scenario, dist)
    return _row_from_report(value, "ok", report)


def sweep_bridge_prior(
    scenario: Scenario,
    values: list[float],
    config: SearchConfig | None = None,
) -> list[SweepRow]:
    """Re-solve the scenario with the bridge marginal pinned to each value."""
    if scenario.weights is not None:
        raise ValueError("scenario carries fixed weights; nothing to re-solve")
    atom = _bridge_atom(scenario)
    k = scenario.space.index(atom)
    bridge_mask = scenario.space.atom_mask(atom)
    bridge_prop = Proposition.atom(scenario.space, atom)
    base_config = config or SearchConfig(seed=scenario.seed, max_samples=20_000)

    rows = []
    for value in values:
        if value in (0.0, 1.0):
            rows.append(_degenerate_endpoint(scenario, bridge_mask, value))
            continue
        constraints = scenario.condition_constraints()
        constraints += [
            c for c in scenario.extra_constraints if not _constraint_mentions_atom(c, k)
        ]
        constraints.append(
            ProbConstraint(
                kind="equality",
                lhs=Side(target=bridge_prop),
                rhs=Side(const=value),
                margin=SOLVE_EQUALITY_SLACK,
                label="bridge_prior_pin",
            )
        )
        cs = ConstraintSet(space=scenario.space, constraints=constraints)
        result = find_model(cs, base_config)
        dist = _repair_bridge_marginal(result.distribution, bridge_mask, value)
        if dist is None:
            rows.append(SweepRow(value, "infeasible", {}, None, None))
            continue
        tight = ConstraintSet(
            space=scenario.space,
            constraints=[
                c if c.label != "bridge_prior_pin"
                else ProbConstraint(kind="equality", lhs=c.lhs, rhs=c.rhs,
                                    margin=0.0, label=c.label)
                for c in cs.constraints
            ],
        )
        status = "ok" if is_satisfied(dist, tight) else "infeasible"
        report = evaluate_schema(scenario, dist) if status == "ok" else None
        rows.append(_row_from_report(value, status, report))
    return rows


def _repair_bridge_marginal(
    dist: JointDistribution, bridge_mask: np.ndarray, value: float
) -> JointDistribution | None:
    """Rescale the bridge/no-bridge blocks so the marginal is exactly `value`.

    Per-block scaling preserves every conditional probability within a block.
    """
    w = dist.weights.copy()
    on = float(w[bridge_mask].sum())
    if on <= 0.0 or on >= 1.0:
        return None
    w[bridge_mask] *= value / on
    w[~bridge_mask] *= (1.0 - value) / (1.0 - on)
    return JointDistribution.from_unnormalized(dist.space, w)


def sweep_condition_margin(
    scenario: Scenario,
    label: str,
    values: list[float],
    config: SearchConfig | None = None,
) -> list[SweepRow]:
    """Re-solve the scenario with one condition's margin swept over a grid."""
    if scenario.weights is not None:
        raise ValueError("scenario carries fixed weights; nothing to re-solve")
    if label not in scenario.labels:
        raise ValueError(f"unknown condition label {label!r}; have {scenario.labels}")
    rows = []
    for value in values:
        margins = dict(scenario.margins)
        margins[label] = value
        variant = Scenario(
            name=scenario.name,
            space=scenario.space,
            schema=scenario.schema,
            roles=scenario.roles,
            margins=margins,
            extra_constraints=scenario.extra_constraints,
            seed=scenario.seed,
            condition_labels=scenario.condition_labels,
        )
        cfg = config or SearchConfig(seed=scenario.seed, max_samples=20_000)
        result = find_model(variant.constraint_set(), cfg)
        if not result.found:
            rows.append(SweepRow(value, "infeasible", {}, None, None))
            continue
        report = evaluate_schema(variant, result.distribution)
        rows.append(_row_from_report(value, "ok", report))
    return rows
