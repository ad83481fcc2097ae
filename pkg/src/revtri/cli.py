"""Command-line surface: check, fuzz, extremal, sweep.

Exit codes: 0 all bounds hold, 1 a bound was violated, 2 a hypothesis
failed, 3 input or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds as B
from .errors import RevtriError
from .extremal import RECIPE_BOUNDS
from .fuzz import fuzz
from .hilbert import COMPLEX, REAL
from .scenario import (
    EXIT_HOLDS,
    EXIT_INPUT_ERROR,
    EXIT_VIOLATED,
    RunReport,
    exit_code,
    extremal_scenario,
    family_extremal_scenario,
    load_scenario,
    report_to_csv,
    report_to_json,
    run,
    save_scenario,
)
from .sweep import sweep, sweep_to_csv


def _write_report(report: RunReport, out: str | None) -> None:
    if out is None:
        return
    path = Path(out)
    text = report_to_csv(report) if path.suffix == ".csv" else report_to_json(report)
    path.write_text(text, encoding="utf-8")


def _print_report(report: RunReport) -> None:
    print(f"scenario {report.scenario_id}: {report.rollup}")
    print(f"  defect {report.defect.value!r} (err {report.defect.err_est:.3e})")
    for r in report.results:
        print(f"  {r.bound_id:10s} {r.verdict:18s} lhs={r.lhs!r} rhs={r.rhs!r} "
              f"margin={r.margin!r} err_budget={r.err_budget:.3e}")


def _cmd_check(args) -> int:
    scenario = load_scenario(args.file)
    report = run(scenario)
    _print_report(report)
    _write_report(report, args.out)
    return exit_code(report)


def _cmd_fuzz(args) -> int:
    summary = fuzz(args.bound, args.trials, args.seed, d=args.dim, field=args.field,
                   n_family=args.n_family)
    data = summary.to_dict()
    print(f"fuzz {summary.bound_id}: {summary.holds}/{summary.trials} holds, "
          f"{summary.violated} violated, {summary.hypothesis_failed} hypothesis_failed")
    print(f"  worst margin {summary.worst_margin!r} at trial {summary.worst_margin_trial}")
    if "printed_form" in data:
        pf = data["printed_form"]
        print(f"  printed-form margins: min {pf['min_margin']!r} max {pf['max_margin']!r} "
              f"negative in {pf['negative_count']} trials (diagnostic only)")
    if args.out:
        Path(args.out).write_text(json.dumps(data, sort_keys=True, indent=2) + "\n",
                                  encoding="utf-8")
    if summary.violated:
        return EXIT_VIOLATED
    if summary.hypothesis_failed:
        return 2
    return EXIT_HOLDS


def _extremal_params(args) -> dict:
    params = {}
    for name in ("rho", "m", "M", "k", "r", "alpha"):
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    return params


def _cmd_extremal(args) -> int:
    if args.bound == B.THM_3_1:
        scenario = family_extremal_scenario(n=args.n_family, c=args.c,
                                            interval=tuple(args.interval),
                                            n_panels=args.panels)
    elif args.bound in RECIPE_BOUNDS:
        scenario = extremal_scenario(args.bound, _extremal_params(args),
                                     d=args.dim, field=args.field,
                                     interval=tuple(args.interval), n_panels=args.panels)
    else:
        raise RevtriError(f"no extremal recipe for bound {args.bound!r}")
    report = run(scenario)
    _print_report(report)
    gap = report.results[0].margin
    print(f"  equality gap {gap!r}")
    if args.scenario_out:
        save_scenario(scenario, args.scenario_out)
    _write_report(report, args.out)
    return exit_code(report)


def _cmd_sweep(args) -> int:
    base = load_scenario(args.base) if args.base else None
    rows, warnings = sweep(args.bound, args.param, getattr(args, "from"), args.to,
                           args.steps, base)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    text = sweep_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    if any(r.verdict == B.VIOLATED for r in rows):
        return EXIT_VIOLATED
    if any(r.verdict == B.HYPOTHESIS_FAILED for r in rows):
        return 2
    return EXIT_HOLDS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revtri",
        description="Certify reverse triangle inequalities on sampled vector-valued integrals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="evaluate a scenario file")
    p_check.add_argument("file")
    p_check.add_argument("--out", help="write the report (JSON, or CSV if path ends in .csv)")
    p_check.set_defaults(func=_cmd_check)

    p_fuzz = sub.add_parser("fuzz", help="seeded hypothesis-by-construction fuzzing")
    p_fuzz.add_argument("--bound", required=True, choices=sorted(B.ALL_BOUND_IDS))
    p_fuzz.add_argument("--trials", type=int, required=True)
    p_fuzz.add_argument("--seed", type=int, required=True)
    p_fuzz.add_argument("--dim", type=int, default=4)
    p_fuzz.add_argument("--field", choices=(REAL, COMPLEX), default=REAL)
    p_fuzz.add_argument("--n-family", type=int, default=3)
    p_fuzz.add_argument("--out", help="write the summary JSON")
    p_fuzz.set_defaults(func=_cmd_fuzz)

    p_ext = sub.add_parser("extremal", help="build and certify an equality-case scenario")
    p_ext.add_argument("--bound", required=True,
                       choices=sorted(RECIPE_BOUNDS + (B.THM_3_1,)))
    p_ext.add_argument("--rho", type=float)
    p_ext.add_argument("--m", type=float)
    p_ext.add_argument("--M", type=float)
    p_ext.add_argument("--k", type=float)
    p_ext.add_argument("--r", type=float)
    p_ext.add_argument("--alpha", type=float, help="component along e for the dominance recipe")
    p_ext.add_argument("--c", type=float, default=1.0, help="family amplitude (THM_3_1)")
    p_ext.add_argument("--n-family", type=int, default=2)
    p_ext.add_argument("--dim", type=int, default=2)
    p_ext.add_argument("--field", choices=(REAL, COMPLEX), default=REAL)
    p_ext.add_argument("--interval", type=float, nargs=2, default=(0.0, 1.0))
    p_ext.add_argument("--panels", type=int, default=None)
    p_ext.add_argument("--out", help="write the report (JSON, or CSV if path ends in .csv)")
    p_ext.add_argument("--scenario-out", help="write the scenario file (golden fixture)")
    p_ext.set_defaults(func=_cmd_extremal)

    p_sweep = sub.add_parser("sweep", help="tabulate a bound across a parameter range")
    p_sweep.add_argument("--bound", required=True, choices=sorted(RECIPE_BOUNDS))
    p_sweep.add_argument("--param", required=True)
    p_sweep.add_argument("--from", type=float, required=True)
    p_sweep.add_argument("--to", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--emit", choices=("csv",), default="csv")
    p_sweep.add_argument("--base", help="base scenario file supplying fixed parameters")
    p_sweep.add_argument("--out", help="write the CSV here instead of stdout")
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RevtriError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
