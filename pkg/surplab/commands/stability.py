"""`stability`: certify closeness to a disjoint union of cliques."""
from __future__ import annotations

import argparse
import logging

from ..graph import write_graph
from ..report import Report
from ..stability import stability_certificate
from . import EXIT_NOT_CERTIFIED, Command, Outcome
from .common import add_graph_input, add_param_flags, graph_summary, load_graph, params_from_args

logger = logging.getLogger(__name__)


def configure(parser: argparse.ArgumentParser) -> None:
    add_graph_input(parser)
    add_param_flags(parser)
    parser.add_argument("--model", metavar="PATH", help="write the clique-union model graph here when certified")


def stability_command(args: argparse.Namespace) -> Outcome:
    G = load_graph(args)
    params = params_from_args(args)
    result = stability_certificate(G, params)

    report = Report("stability", G.digest)
    report.findings = {
        "graph": graph_summary(G),
        "stability": {
            "status": result.status,
            "failure": result.failure,
            "cliques": result.pull.cliques,
            "clique_target": result.pull.target,
            "low_degree_removed": result.pull.low_degree_removed,
            "blocks": result.blocks.blocks,
            "gamma_edges": list(result.gamma.gamma.edges()),
            "clusters": result.clusters,
            "parts": result.parts,
            "absorbed": result.absorbed,
            "model": result.model,
            "edit_distance": result.edit_distance,
            "closeness": result.closeness,
            "uncovered_edges": result.uncovered_edges,
            "eigen_gate": result.eigen_gate,
            "notes": result.notes,
        },
    }
    report.tolerances = {"theta_lo": params.theta_lo, "theta_hi": params.theta_hi, "edit_distance": 0.0}

    summary = [
        f"Status: {result.status}",
        f"Pulled {len(result.pull.cliques)} cliques (target size {result.pull.target}), "
        f"{result.uncovered_edges} edges uncovered",
        f"|lambda_n| = {result.eigen_gate.lambda_min_abs:.6g}, surplus <= {result.eigen_gate.surplus_bound:.6g}",
    ]
    if not result.certified:
        summary.append(f"Failure: {result.failure}")
        return Outcome(report, summary, EXIT_NOT_CERTIFIED, result.status)

    summary.append(
        f"{len(result.clusters)} clusters, edit distance {result.edit_distance}, closeness {result.closeness:.6g}"
    )
    if args.model:
        write_graph(result.model, args.model)
        logger.info(f"Model graph written to {args.model}")
    return Outcome(report, summary, status=result.status)


def get_stability_commands() -> list[Command]:
    """Return all commands for the clique-union stability pipeline."""
    return [
        Command("stability", "closeness to a disjoint union of cliques", configure, stability_command),
    ]
