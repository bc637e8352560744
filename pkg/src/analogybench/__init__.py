"""Workbench for Bayesian confirmation by analogy over finite probability spaces."""

__version__ = "0.1.0"

from .prob import (
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
from .confirmation import (
    ConfirmationVerdict,
    TransitivityReport,
    check_corollary,
    check_transitivity,
    confirm,
    fuzz_transitivity,
    mine_naive_transitivity_counterexample,
)
from .finder import (
    ConstraintSet,
    ProbConstraint,
    SearchConfig,
    Side,
    find_model,
    grid_enumerate,
    penalty,
    sample_simplex,
)
from .scenarios import (
    BridgeSpec,
    Scenario,
    SchemaReport,
    euler_characteristic,
    evaluate_schema,
    extend_with_bridge,
    load_corpus,
    load_scenario,
    symmetry_baseline,
)

__all__ = [
    "BridgeSpec",
    "ConfirmationVerdict",
    "ConstraintSet",
    "JointDistribution",
    "ProbConstraint",
    "Proposition",
    "Scenario",
    "SchemaReport",
    "SearchConfig",
    "Side",
    "SpaceMismatchError",
    "TransitivityReport",
    "UndefinedConditionalError",
    "WorldSpace",
    "check_corollary",
    "check_transitivity",
    "conditional",
    "confirm",
    "entails",
    "euler_characteristic",
    "evaluate_schema",
    "extend_with_bridge",
    "find_model",
    "fuzz_transitivity",
    "grid_enumerate",
    "is_non_extremal",
    "load_corpus",
    "load_scenario",
    "mine_naive_transitivity_counterexample",
    "penalty",
    "probability",
    "sample_simplex",
    "symmetry_baseline",
]
