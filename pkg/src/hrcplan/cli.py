"""Command-line interface.

Subcommands:
  run         plan a scenario file round by round, emitting JSON-lines logs
  count       count feasible candidates at a given lookahead depth
  case-study  run the bundled 7-screw toy-box scenario
  batch       compare horizon policies on random instances, write a report
  serve       start the HTTP session service

Exit codes: 0 success, 1 parse/validation error, 2 resource cap exceeded,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from typing import Any, Sequence

from .errors import (
    ConstraintViolationError,
    InvariantViolationError,
    ResourceLimitError,
    SafetyViolationError,
    ScenarioFormatError,
    ScenarioValidationError,
)
from .model import WorldState, load_scenario_file
from .planner import RoundLog, run, solve_full_horizon
from .sim import (
    case_study_scenario,
    load_batch_config,
    motion_source_for,
    parse_motion_spec,
    run_batch,
    run_case_study,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RESOURCE = 2
EXIT_INVARIANT = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; remap to the validation exit code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_with(message))

    def exit_with(self, message: str) -> int:
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return EXIT_INVALID


def _canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit_run(logs: list[RoundLog], total: float, oracle_cost: float | None, out):
    for log in logs:
        print(_canonical(log.to_dict()), file=out)
    summary: dict[str, Any] = {"rounds": len(logs), "total_cost": total}
    if oracle_cost is not None:
        summary["oracle_cost"] = oracle_cost
        summary["optimality_gap"] = total - oracle_cost
    print(_canonical(summary), file=out)


def _with_out(path: str | None):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _cmd_run(args) -> int:
    scenario = load_scenario_file(args.scenario)
    if args.horizon is not None:
        scenario = replace(scenario, horizon=args.horizon)
    model = parse_motion_spec(args.motion)
    logs, total = run(scenario, motion_source_for(scenario, model))
    oracle_cost = solve_full_horizon(scenario).total_cost if args.oracle else None
    out, close = _with_out(args.out)
    try:
        _emit_run(logs, total, oracle_cost, out)
    finally:
        if close:
            out.close()
    if args.figures_dir:
        from .report import save_round_figures

        save_round_figures(scenario, logs, args.figures_dir)
    return EXIT_OK


def _cmd_count(args) -> int:
    from .candidates import count_candidates

    scenario = load_scenario_file(args.scenario)
    state = WorldState.initial(scenario)
    print(count_candidates(scenario, state, args.depth))
    return EXIT_OK


def _cmd_case_study(args) -> int:
    logs = run_case_study()
    total = 0.0
    for log in logs:
        total += log.executed.step_cost
    scenario = case_study_scenario()
    oracle_cost = solve_full_horizon(scenario).total_cost if args.oracle else None
    out, close = _with_out(args.out)
    try:
        _emit_run(logs, total, oracle_cost, out)
    finally:
        if close:
            out.close()
    if args.figures_dir:
        from .report import save_round_figures

        save_round_figures(scenario, logs, args.figures_dir)
    return EXIT_OK


def _cmd_batch(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = load_batch_config(fh.read())
    report = run_batch(config)
    os.makedirs(args.out_dir, exist_ok=True)
    csv_text = report.to_csv()
    with open(os.path.join(args.out_dir, "stats.tsv"), "w", encoding="utf-8") as fh:
        fh.write(csv_text)
    with open(os.path.join(args.out_dir, "stats.json"), "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")
    from .report import save_batch_figures

    save_batch_figures(report, args.out_dir)
    sys.stdout.write(csv_text)
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(snapshot_dir=args.snapshot_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hrcplan", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="plan a scenario file round by round")
    p_run.add_argument("--scenario", required=True, help="scenario JSON file")
    p_run.add_argument("--horizon", type=int, default=None,
                       help="override the scenario's lookahead depth")
    p_run.add_argument("--motion", default="static",
                       help="static | waypoints:<path> | walk:<step>:<seed>")
    p_run.add_argument("--oracle", action="store_true",
                       help="also solve the full horizon exactly and report the gap")
    p_run.add_argument("--out", default=None, help="write JSON-lines here instead of stdout")
    p_run.add_argument("--figures-dir", default=None, help="render per-round scene PNGs")
    p_run.set_defaults(func=_cmd_run)

    p_count = sub.add_parser("count", help="count feasible candidates from the start state")
    p_count.add_argument("--scenario", required=True)
    p_count.add_argument("--depth", type=int, required=True)
    p_count.set_defaults(func=_cmd_count)

    p_case = sub.add_parser("case-study", help="run the bundled toy-box scenario")
    p_case.add_argument("--oracle", action="store_true")
    p_case.add_argument("--out", default=None)
    p_case.add_argument("--figures-dir", default=None)
    p_case.set_defaults(func=_cmd_case_study)

    p_batch = sub.add_parser("batch", help="run the horizon-policy comparison")
    p_batch.add_argument("--config", required=True, help="batch config JSON file")
    p_batch.add_argument("--out-dir", default="batch_report",
                         help="directory for stats.tsv, stats.json and figures")
    p_batch.set_defaults(func=_cmd_batch)

    p_serve = sub.add_parser("serve", help="start the HTTP session service")
    p_serve.add_argument("--host", default=os.environ.get("HRCPLAN_HOST", "127.0.0.1"))
    p_serve.add_argument("--port", type=int,
                         default=int(os.environ.get("HRCPLAN_PORT", "8000")))
    p_serve.add_argument("--snapshot-dir",
                         default=os.environ.get("HRCPLAN_SNAPSHOT_DIR"))
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ScenarioFormatError, ScenarioValidationError, ValueError,
            FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (SafetyViolationError, ConstraintViolationError, InvariantViolationError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
