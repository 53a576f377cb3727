"""Command-line front end.

Exit codes: 0 when every asserted property holds, 1 on an assertion failure,
2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from ..errors import ConfigError, RatCurvesError
from .config import load_config
from .experiments import run_experiment
from .reports import check_report, dims_report, sample_report, solve_report

log = logging.getLogger("ratcurves")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH", help="JSON run configuration")
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--stable", action="store_true", help="omit timings so reports are byte-stable")
    common.add_argument("--seed", type=int, help="override the configured seed")
    common.add_argument("--trials", type=int, help="override the number of trials")
    common.add_argument("--field", choices=("q", "fp"), help="override the field")
    common.add_argument("--prime", type=int, help="override the prime")
    common.add_argument("--workers", type=int, default=1, help="threads for independent trials")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="ratcurves", description="Rational curves on blowups of products of projective spaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("check", parents=[common], help="hypothesis report")
    sub.add_parser("dims", parents=[common], help="expected dimensions")
    sub.add_parser("solve", parents=[common], help="compute one sigma- or tau-fiber")
    sub.add_parser("sample", parents=[common], help="sample one fiber member with diagnostics")
    sub.add_parser("verify", parents=[common], help="run the configured experiment")
    return parser


def _text(report: dict) -> str:
    kind = report["report"]
    lines = [f"{kind}: {report['config']} (seed {report['seed']}, field {report['field']['kind']})"]
    if kind == "check":
        h = report["hypotheses"]
        lines.append(f"  m = {h['m']}")
        lines.append(f"  factor margins = {h['factor_margins']}, center margins = {h['center_margins']}")
        if "c_H" in h:
            lines.append(f"  c_H = {h['c_H']}")
        lines.append(f"  clauses: {', '.join(h['clauses']) or 'none'}")
        lines.append(f"  verdict: {h['verdict']}")
    elif kind == "dims":
        for key in ("e_strict", "expected_dim_mor", "expected_fiber_dim", "hilbert_dim"):
            lines.append(f"  {key} = {report[key]}")
        if report["expected_empty"]:
            lines.append("  fiber expected empty")
    elif kind == "solve":
        r = report["result"]
        lines.append(f"  {report['fiber']} fiber: {r['rows']} rows, rank {r['rank']}")
        lines.append(f"  projective dim {r['projective_dim']} (expected {r['expected_dim']})")
        lines.append(f"  kernel splitting {r['splitting']}, bounds ok: {r['splitting_bounds_ok']}")
        if r["degenerate"]:
            lines.append("  degenerate: every member is constant in some factor")
    elif kind == "sample":
        if "error" in report:
            lines.append(f"  no sample: {report['error']}")
        else:
            s = report["sample"]
            lines.append(f"  found after {s['attempts']} attempt(s), class {s['recovered']}")
            lines.append(f"  f^*T splitting {s['tangent_splitting']}, free: {s['free']}")
            lines.append(f"  H^1 vanishing at twist {s['twist']}: {s['twist_vanishing']}")
    else:
        lines.append(f"  experiment {report['experiment']}: {report['passes']}/{report['trials']} passed")
        lines.append(f"  threshold {report['threshold']}, asserted: {report['asserted']}")
        for key, value in report["summary"].items():
            lines.append(f"  {key}: {value}")
    lines.append("  ok" if report["ok"] else "  FAILED")
    return "\n".join(lines)


def _run(args) -> dict:
    overrides = {"seed": args.seed, "trials": args.trials, "field": args.field, "prime": args.prime}
    run = load_config(args.config, overrides)
    if args.command == "check":
        return check_report(run)
    if args.command == "dims":
        return dims_report(run)
    if args.command == "solve":
        return solve_report(run)
    if args.command == "sample":
        return sample_report(run)
    return run_experiment(run, max(1, args.workers)).to_dict(stable=args.stable)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        report = _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RatCurvesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(_text(report))
    log.info("exit %s", EXIT_OK if report["ok"] else EXIT_FAIL)
    return EXIT_OK if report["ok"] else EXIT_FAIL
