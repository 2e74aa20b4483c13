"""`verify`: seeded property suites."""
from __future__ import annotations

import argparse
import logging

from ..report import Report
from ..verification import SUITES, run_suites
from . import EXIT_NOT_CERTIFIED, Command, Outcome, UsageError
from .common import add_param_flags, params_from_args

logger = logging.getLogger(__name__)


def configure(parser: argparse.ArgumentParser) -> None:
    add_param_flags(parser)
    parser.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    parser.add_argument("--count", type=int, help="instances per suite (default: per-suite count)")


def verify_command(args: argparse.Namespace) -> Outcome:
    if args.count is not None and args.count < 0:
        raise UsageError(f"--count: must be >= 0, got {args.count}")
    params = params_from_args(args)
    results = run_suites(args.suite, args.count, args.seed, params, args.workers or 1)

    report = Report("verify")
    report.findings = {"suite": args.suite, "seed": args.seed, "suites": results}
    report.tolerances = {r.name: r.tolerance for r in results}

    summary = []
    for r in results:
        mark = "pass" if r.ok else "FAIL"
        summary.append(f"{r.name:<10} {r.passed}/{r.total} [{mark}]")
        for failure in r.failures:
            summary.append(f"    {failure}")
    failed = [r.name for r in results if not r.ok]
    if failed:
        summary.append(f"Failed suites: {', '.join(failed)}")
        return Outcome(report, summary, EXIT_NOT_CERTIFIED, "failed", results)
    return Outcome(report, summary, status="passed", suites=results)


def get_verify_commands() -> list[Command]:
    """Return all commands for the property suites."""
    return [
        Command("verify", "run the seeded property suites", configure, verify_command),
    ]
