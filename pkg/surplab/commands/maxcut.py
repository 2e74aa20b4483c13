"""`maxcut`: exact or local-search MaxCut with the Edwards and eigenvalue bounds."""
from __future__ import annotations

import argparse
import logging
import math

import humanize

from ..config import settings
from ..report import Report
from ..surplus import maxcut_exact, maxcut_local_search, surplus_upper_bound_lambda
from . import Command, Outcome, UsageError
from .common import add_graph_input, add_param_flags, graph_summary, load_graph, params_from_args

logger = logging.getLogger(__name__)


def configure(parser: argparse.ArgumentParser) -> None:
    add_graph_input(parser)
    add_param_flags(parser)
    parser.add_argument(
        "--method", choices=("auto", "exact", "local"), default="auto",
        help="auto: exact up to --exact-limit vertices, local search beyond",
    )
    parser.add_argument("--restarts", type=int, help=f"local search restarts (default {settings.LOCAL_SEARCH_RESTARTS})")


def maxcut_command(args: argparse.Namespace) -> Outcome:
    G = load_graph(args)
    params = params_from_args(args)
    if args.restarts is not None and args.restarts < 0:
        raise UsageError(f"--restarts: must be >= 0, got {args.restarts}")
    method = args.method
    if method == "auto":
        method = "exact" if G.n <= params.exact_limit else "local"
    if method == "exact":
        result = maxcut_exact(G, params.exact_limit, args.workers)
    else:
        result = maxcut_local_search(G, seed=args.seed, restarts=args.restarts)

    edwards = G.m / 2 + (math.sqrt(8 * G.m + 1) - 1) / 8
    upper = surplus_upper_bound_lambda(G) if G.n else 0.0
    report = Report("maxcut", G.digest)
    report.findings = {
        "graph": graph_summary(G),
        "maxcut": {
            "value": result.value,
            "surplus": result.surplus,
            "method": result.method,
            "exact": result.exact,
            "cut": result.cut,
        },
        "edwards_bound": edwards,
        "edwards_holds": result.value >= edwards - 1e-9 if result.exact else None,
        "eigenvalue_surplus_bound": upper,
        "eigenvalue_bound_holds": result.surplus <= upper + 1e-6,
    }
    report.tolerances = {"edwards_bound": 1e-9, "eigenvalue_surplus_bound": 1e-6}

    kind = "exact" if result.exact else "local search, lower bound"
    summary = [
        f"Graph: n={humanize.intcomma(G.n)}, m={humanize.intcomma(G.m)}",
        f"MaxCut ({kind}): value {result.value}, surplus {result.surplus:g}",
        f"Edwards bound {edwards:.6g}; surplus <= |lambda_n| n/4 = {upper:.6g}",
    ]
    return Outcome(report, summary)


def get_maxcut_commands() -> list[Command]:
    """Return all commands for MaxCut."""
    return [
        Command("maxcut", "maximum cut value and surplus", configure, maxcut_command),
    ]
