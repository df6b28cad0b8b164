"""Batch command line: solve, check, power, casestudy, serve.

All structured input comes from JSON config files; flags carry only
paths, seeds, and rep-count overrides.  Runs are reproducible: every
output embeds the config digest and the seed, and repeated runs with
the same config and seed produce byte-identical files.

Exit codes: 0 success, 2 validation/config error (machine-readable
JSON on stderr), 3 infeasible solve.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .casestudy import best_arms_map, case_study_power, optimize_simple_pap
from .checks import check_monotonicity, check_size_control, check_truthful_message
from .discretize import ModelError
from .extremal import check_extremal_conditions
from .lp import InfeasibleError, optimal_pap
from .motivating import RULE_KINDS, power_curve
from .rules import IncompleteRuleError
from .schemas import (
    SchemaError,
    parse_casestudy,
    parse_motivating,
    parse_problem,
    parse_rule,
)

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 2, 3


def _fail(code: str, message: str, field_path: str = "") -> int:
    payload = {"code": code, "field_path": field_path, "message": message}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    return EXIT_USAGE


def _load_json(path: str, what: str) -> tuple[dict, str]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise SchemaError(what, f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(raw), hashlib.sha256(raw).hexdigest()[:16]
    except json.JSONDecodeError as exc:
        raise SchemaError(what, f"{path} is not valid JSON: {exc}") from exc


def _dump_json(path: str, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")


def _csv_float(x: float) -> str:
    return repr(float(x))


def cmd_solve(args) -> int:
    data, digest = _load_json(args.config, "config")
    problem = parse_problem(data)
    signal = _match_signal(problem, args.signal)
    alpha = args.alpha if args.alpha is not None else problem.alpha
    try:
        pap = optimal_pap(problem, signal=signal, alpha=alpha)
    except InfeasibleError as exc:
        print(json.dumps({"code": "infeasible", "message": str(exc)}), file=sys.stderr)
        return EXIT_INFEASIBLE
    report = check_extremal_conditions(pap.rule, problem)
    solver = pap.lp_solution.to_json_dict()
    solver.pop("x")
    _dump_json(
        args.out,
        {
            "config_digest": digest,
            "seed": data.get("mc", {}).get("seed", 0),
            "signal": str(signal),
            "alpha": alpha,
            "power": pap.power,
            "rule": pap.rule.to_json_dict(),
            "solver": solver,
            "extremal": report.to_json_dict(),
        },
    )
    return EXIT_OK


def _match_signal(problem, requested):
    if requested is None:
        return problem.signals[0]
    for s in problem.signals:
        if str(s) == str(requested):
            return s
    raise SchemaError("signal", f"unknown signal {requested!r}; have {list(problem.signals)}")


def cmd_check(args) -> int:
    rule_data, rule_digest = _load_json(args.rule, "rule")
    prob_data, prob_digest = _load_json(args.problem, "problem")
    problem = parse_problem(prob_data)
    rule = parse_rule(rule_data, shape=problem.grid.shape)
    try:
        reports = {
            "monotonicity": check_monotonicity(rule, problem, tol=args.tol).to_json_dict(),
            "size": check_size_control(rule, problem, tol=args.tol).to_json_dict(),
        }
        if rule.has_signal_dimension:
            reports["truthful_message"] = check_truthful_message(
                rule, problem, tol=args.tol
            ).to_json_dict()
    except (IncompleteRuleError, ModelError) as exc:
        return _fail("invalid-rule", str(exc))
    payload = {
        "config_digest": prob_digest,
        "rule_digest": rule_digest,
        "seed": prob_data.get("mc", {}).get("seed", 0),
        "reports": reports,
        "passed": all(r["passed"] for r in reports.values()),
    }
    if args.out:
        _dump_json(args.out, payload)
    else:
        print(json.dumps(payload, sort_keys=True, indent=1))
    return EXIT_OK


def cmd_power(args) -> int:
    data, digest = _load_json(args.config, "config")
    if args.seed is not None:
        data["seed"] = args.seed
    if args.reps is not None:
        data["reps"] = args.reps
    config = parse_motivating(data)
    kinds = tuple(args.kinds.split(",")) if args.kinds else RULE_KINDS
    for k in kinds:
        if k not in RULE_KINDS:
            raise SchemaError("kinds", f"unknown rule kind {k!r}")
    curve = power_curve(kinds, config)
    lines = [f"# config_digest={digest} seed={config.seed} reps={config.reps}"]
    lines.append("theta,rule,power,se")
    for theta, kind, power, se in curve.csv_rows():
        lines.append(f"{_csv_float(theta)},{kind},{_csv_float(power)},{_csv_float(se)}")
    Path(args.out).write_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_casestudy(args) -> int:
    data, digest = _load_json(args.config, "config")
    if args.seed is not None:
        data["seed"] = args.seed
    if args.reps is not None:
        data["reps"] = args.reps
    if args.family is not None:
        data["family"] = args.family
    parsed = parse_casestudy(data)

    if args.mode == "map":
        p1 = parsed.get("p1_grid", np.linspace(0.0, 1.0, 11))
        p2 = parsed.get("p2_grid", np.linspace(0.0, 1.0, 11))
        rows = best_arms_map(
            parsed["design"], parsed["alpha"], p1, p2,
            reps=parsed["reps"], seed=parsed["seed"],
        )
        lines = [f"# config_digest={digest} seed={parsed['seed']} reps={parsed['reps']}"]
        lines.append("p1,p2,subset")
        for r1, r2, mask in rows:
            lines.append(f"{_csv_float(r1)},{_csv_float(r2)},{mask}")
        Path(args.out).write_text("\n".join(lines) + "\n")
        return EXIT_OK

    family = parsed.get("family")
    if family is None:
        raise SchemaError("family", "pick a family via the config or --family")
    if args.mode == "simple" and family not in ("wald-fixed-subset", "arm-specific-cutoffs"):
        raise SchemaError("family", f"mode 'simple' expects a simple family, got {family!r}")
    runner = optimize_simple_pap if args.mode == "simple" else case_study_power
    kwargs = dict(reps=parsed["reps"], seed=parsed["seed"], eval_reps=parsed["eval_reps"])
    if runner is case_study_power:
        kwargs["cells"] = parsed["cells"]
        try:
            result = case_study_power(
                parsed["design"], parsed["availability"], family, parsed["alpha"], **kwargs
            )
        except InfeasibleError as exc:
            print(json.dumps({"code": "infeasible", "message": str(exc)}), file=sys.stderr)
            return EXIT_INFEASIBLE
    else:
        result = optimize_simple_pap(
            parsed["design"], parsed["availability"], parsed["alpha"], family, **kwargs
        )
    _dump_json(
        args.out,
        {
            "config_digest": digest,
            "seed": parsed["seed"],
            "result": result.to_json_dict(),
        },
    )
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="papkit", description="Optimal implementable tests under selective reporting"
    )
    parser.add_argument("--version", action="version", version=f"papkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the power-maximizing LP for a discrete problem")
    p.add_argument("--config", required=True)
    p.add_argument("--signal", default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="implementability and size reports for a rule")
    p.add_argument("--rule", required=True)
    p.add_argument("--problem", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("power", help="power curves for the five testing rules")
    p.add_argument("--config", required=True)
    p.add_argument("--kinds", default=None, help="comma-separated subset of a1..a5")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("casestudy", help="fit case-study rule families")
    p.add_argument("--config", required=True)
    p.add_argument("--mode", choices=("power", "simple", "map"), default="power")
    p.add_argument("--family", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_casestudy)

    p = sub.add_parser("serve", help="start the JSON service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage; normalize unknown input to exit 2
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SchemaError as exc:
        print(json.dumps(exc.to_json_dict(), sort_keys=True), file=sys.stderr)
        return EXIT_USAGE
    except ModelError as exc:
        return _fail("model", str(exc))


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
