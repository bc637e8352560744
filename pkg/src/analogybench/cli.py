"""Command-line front end.

Commands:
  check <file> [--json] [--seed N] [--margin X]     evaluate a scenario file
  find-model <file> [--seed N]                      solve a scenario's constraints
  fuzz-theorem --samples N --seed N --margin X      fuzz the transitivity theorem
  counterexample --seed N --budget N [--output F]   mine a naive-transitivity failure
  sweep <file> --param P --range lo:hi:step --output file.csv

Exit codes: 0 completed, 2 validation/parse error, 3 infeasible constraints,
4 counterexample not found, 5 I/O error, 1 unexpected error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import __version__
from .confirmation import (
    check_transitivity,
    confirm,
    fuzz_transitivity,
    mine_naive_transitivity_counterexample,
)
from .finder import SearchConfig, find_model
from .formula import FormulaError
from .prob import JointDistribution, probability, conditional
from .scenarios import (
    Scenario,
    ScenarioFormatError,
    evaluate_schema,
    load_scenario,
)
from .sweep import sweep_bridge_prior, sweep_condition_margin, sweep_values

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_NOT_FOUND = 4
EXIT_IO = 5

REPORT_VERSION = 1
CSV_HEADER_COMMENT = "# analogybench sweep csv v1"


def _print_json(report: dict) -> None:
    print(json.dumps(report, sort_keys=True))


def _condition_dict(cond) -> dict:
    return {
        "holds": cond.holds,
        "margin": cond.margin,
        "applicable": cond.applicable,
        "at_boundary": cond.at_boundary,
    }


def _schema_report_dict(report) -> dict:
    return {
        "scenario": report.scenario,
        "schema": report.schema,
        "conditions": {k: _condition_dict(c) for k, c in report.conditions.items()},
        "bridge_prior": report.bridge_prior,
        "extremality_flags": list(report.extremality_flags),
        "degenerate": report.degenerate,
        "schema_confirms": report.schema_confirms,
        "overall": None
        if report.overall is None
        else {
            "confirms": report.overall.confirms,
            "degree": report.overall.degree,
            "measures": report.overall.measure_values,
        },
    }


def _fmt_margin(value: float) -> str:
    return "   n/a" if math.isnan(value) else f"{value:+.4f}"


def _print_schema_table(report, dist: JointDistribution) -> None:
    print(f"scenario: {report.scenario} ({report.schema})")
    print(f"bridge prior: {report.bridge_prior:.4f}")
    if report.degenerate:
        print("analogy channel degenerate: bridge credence is extremal")
    for label, cond in report.conditions.items():
        state = "holds" if cond.holds else ("inapplicable" if not cond.applicable else "fails")
        print(f"  condition {label}: margin {_fmt_margin(cond.margin)}  {state}")
    if report.overall is not None:
        verdict = "confirms" if report.overall.confirms else "does not confirm"
        print(f"  direct verdict: evidence {verdict} hypothesis "
              f"(degree {report.overall.degree:+.4f})")
    if report.schema_confirms is True:
        print("  analogical verdict: confirmation licensed by all four conditions")
    else:
        print("  analogical verdict: withheld")


def _load(path: str) -> Scenario:
    return load_scenario(path)


def _solve_scenario(scenario: Scenario, seed: int | None):
    config = None
    if seed is not None and scenario.weights is None:
        config = SearchConfig(seed=seed)
    return scenario.solve(config)


def cmd_check(args) -> int:
    scenario = _load(args.scenario)
    started = time.perf_counter()
    dist, result = _solve_scenario(scenario, args.seed)
    if result is not None and not result.found:
        print(
            f"error: constraints of {scenario.name} infeasible within budget "
            f"(best penalty {result.penalty:.3e})",
            file=sys.stderr,
        )
        return EXIT_INFEASIBLE
    report = evaluate_schema(scenario, dist)
    elapsed = time.perf_counter() - started
    if args.json:
        _print_json(
            {
                "version": REPORT_VERSION,
                "command": "check",
                "config": {
                    "scenario_file": args.scenario,
                    "seed": args.seed if args.seed is not None else scenario.seed,
                    "margins": scenario.margins,
                },
                "solver": None
                if result is None
                else {
                    "found": result.found,
                    "penalty": result.penalty,
                    "samples_used": result.samples_used,
                    "achieved_margins": result.achieved_margins,
                },
                "distribution": {
                    "atoms": list(scenario.space.atoms),
                    "weights": [float(w) for w in dist.weights],
                },
                "schema_report": _schema_report_dict(report),
            }
        )
    else:
        _print_schema_table(report, dist)
        print(f"  elapsed: {elapsed:.2f}s", file=sys.stderr)
    return EXIT_OK


def cmd_find_model(args) -> int:
    scenario = _load(args.scenario)
    if scenario.weights is not None:
        print("error: scenario carries explicit weights; nothing to solve", file=sys.stderr)
        return EXIT_VALIDATION
    cs = scenario.constraint_set()
    result = find_model(cs, SearchConfig(seed=args.seed if args.seed is not None else scenario.seed))
    payload = {
        "version": REPORT_VERSION,
        "command": "find-model",
        "config": {"scenario_file": args.scenario, "seed": result.seed},
        "found": result.found,
        "penalty": result.penalty,
        "samples_used": result.samples_used,
        "achieved_margins": result.achieved_margins,
        "distribution": {
            "atoms": list(scenario.space.atoms),
            "weights": [float(w) for w in result.distribution.weights],
        },
    }
    if args.json:
        _print_json(payload)
    else:
        print(f"found: {result.found} (penalty {result.penalty:.3e}, "
              f"{result.samples_used} samples)")
        for atom_values, weight in zip(
            range(scenario.space.world_count), result.distribution.weights
        ):
            desc = scenario.space.world_description(atom_values)
            bits = " ".join(f"{'' if v else '!'}{a}" for a, v in desc.items())
            print(f"  {bits:30s} {weight:.6f}")
        for label, margin in result.achieved_margins.items():
            print(f"  {label}: achieved {_fmt_margin(margin)}")
    return EXIT_OK if result.found else EXIT_INFEASIBLE


def cmd_fuzz_theorem(args) -> int:
    report = fuzz_transitivity(args.samples, args.seed, args.margin)
    payload = {
        "version": REPORT_VERSION,
        "command": "fuzz-theorem",
        "config": {"samples": args.samples, "seed": args.seed, "margin": args.margin},
        "filtered": report.filtered,
        "violations": report.violations,
        "reverified": report.reverified,
        "min_conclusion_margin": report.min_conclusion_margin,
    }
    if args.json:
        _print_json(payload)
    else:
        print(f"samples: {report.samples}")
        print(f"antecedent-satisfying: {report.filtered}")
        print(f"conclusion violations: {report.violations}")
        print(f"scalar re-verified: {report.reverified}")
        if report.filtered:
            print(f"min conclusion margin: {report.min_conclusion_margin:.6f}")
    return EXIT_OK


def _counterexample_scenario_dict(ce) -> dict:
    return {
        "name": "mined_counterexample",
        "atoms": list(ce.distribution.space.atoms),
        "schema": "type1",
        "roles": {"hypothesis": "C", "evidence": "A", "bridge": "B"},
        "distribution": {"weights": [float(w) for w in ce.distribution.weights]},
        "notes": "Machine-mined distribution over which A confirms B and B confirms C "
                 "while A disconfirms C; the schema conditions mirror the transitivity "
                 "conditions, so at least one must fail here.",
    }


def cmd_counterexample(args) -> int:
    ce = mine_naive_transitivity_counterexample(args.seed, args.budget)
    if ce is None:
        print(
            f"no counterexample found within budget {args.budget}; try a larger --budget",
            file=sys.stderr,
        )
        return EXIT_NOT_FOUND
    d = ce.distribution
    first = confirm(d, ce.x, ce.y)
    second = confirm(d, ce.y, ce.z)
    final_degree = conditional(d, ce.z, ce.x) - probability(d, ce.z)
    trans = check_transitivity(d, ce.x, ce.y, ce.z)
    failing = [k for k, c in trans.conditions.items() if not c.holds]
    payload = {
        "version": REPORT_VERSION,
        "command": "counterexample",
        "config": {"seed": args.seed, "budget": args.budget},
        "samples_used": ce.samples_used,
        "distribution": {
            "atoms": list(d.space.atoms),
            "weights": [float(w) for w in d.weights],
        },
        "confirmations": {
            "A_confirms_B": first.degree,
            "B_confirms_C": second.degree,
            "A_to_C_degree": final_degree,
        },
        "failing_conditions": failing,
        "verified": ce.verify(),
    }
    if args.json:
        _print_json(payload)
    else:
        print(f"counterexample found after {ce.samples_used} samples")
        for w_idx, weight in enumerate(d.weights):
            desc = d.space.world_description(w_idx)
            bits = " ".join(f"{'' if v else '!'}{a}" for a, v in desc.items())
            print(f"  {bits:12s} {weight:.6f}")
        print(f"  P(B|A) - P(B) = {first.degree:+.4f}")
        print(f"  P(C|B) - P(C) = {second.degree:+.4f}")
        print(f"  P(C|A) - P(C) = {final_degree:+.4f}")
        print(f"  failing transitivity conditions: {', '.join(failing)}")
    if args.output:
        try:
            with open(args.output, "w") as fh:
                json.dump(_counterexample_scenario_dict(ce), fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError as exc:
            print(f"error writing {args.output}: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK


def _parse_range(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("range must be lo:hi:step")
    lo, hi, step = (float(p) for p in parts)
    return sweep_values(lo, hi, step)


def cmd_sweep(args) -> int:
    scenario = _load(args.scenario)
    values = _parse_range(args.range)
    config = SearchConfig(seed=args.seed) if args.seed is not None else None
    if args.param.startswith("P(") and args.param.endswith(")"):
        rows = sweep_bridge_prior(scenario, values, config)
        swept = args.param
    elif args.param.startswith("margins."):
        label = args.param.split(".", 1)[1]
        rows = sweep_condition_margin(scenario, label, values, config)
        swept = args.param
    else:
        print(
            f"error: unsupported sweep parameter {args.param!r}; "
            "use P(<bridge-atom>) or margins.<label>",
            file=sys.stderr,
        )
        return EXIT_VALIDATION
    labels = scenario.labels
    lines = [CSV_HEADER_COMMENT]
    lines.append(
        ",".join(["value", "status"] + [f"margin_{l}" for l in labels] + ["overall_degree"])
    )
    for row in rows:
        cells = [repr(row.value), row.status]
        for label in labels:
            m = row.condition_margins.get(label, float("nan"))
            cells.append("" if math.isnan(m) else repr(m))
        cells.append("" if row.degree is None else repr(row.degree))
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if args.output:
        try:
            with open(args.output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error writing {args.output}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="analogybench",
        description="Workbench for Bayesian confirmation by analogy over finite "
                    "probability spaces",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate a scenario file")
    p.add_argument("scenario")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--margin", type=float, default=0.0,
                   help="strictness margin for the direct verdict")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("find-model", help="solve a scenario's constraint set")
    p.add_argument("scenario")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_find_model)

    p = sub.add_parser("fuzz-theorem", help="fuzz the transitivity theorem")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--margin", type=float, default=1e-6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fuzz_theorem)

    p = sub.add_parser("counterexample", help="mine a naive-transitivity failure")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--json", action="store_true")
    p.add_argument("--output", default=None,
                   help="write the counterexample as a scenario JSON file")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("sweep", help="sweep a parameter and emit CSV")
    p.add_argument("scenario")
    p.add_argument("--param", required=True)
    p.add_argument("--range", required=True, help="lo:hi:step")
    p.add_argument("--output", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ScenarioFormatError, FormulaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
