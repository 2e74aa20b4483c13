"""`extract`: density increment, balanced peeling and the master chain."""
from __future__ import annotations

import argparse
import logging

from ..extraction import (
    density_increment_iterate,
    density_increment_step,
    extract_balanced,
    master_chain,
)
from ..report import Report
from . import EXIT_NOT_CERTIFIED, EXIT_OK, Command, Outcome, UsageError
from .common import add_graph_input, add_param_flags, graph_summary, load_graph, params_from_args

logger = logging.getLogger(__name__)

STAGES = ("chain", "step", "iterate", "balanced")


def configure(parser: argparse.ArgumentParser) -> None:
    add_graph_input(parser)
    add_param_flags(parser)
    parser.add_argument("--stage", choices=STAGES, default="chain",
                        help="chain: all four stages; step/iterate: density increment; balanced: peeling")


def extract_command(args: argparse.Namespace) -> Outcome:
    G = load_graph(args)
    params = params_from_args(args)
    report = Report("extract", G.digest)
    report.findings = {"graph": graph_summary(G), "stage": args.stage}
    report.tolerances = {"density": 1e-12}

    if args.stage == "step":
        if G.n < 4:
            raise UsageError(f"--stage step needs n >= 4, got n={G.n}")
        step = density_increment_step(G, params)
        report.findings["step"] = step
        report.tolerances["psd"] = 1e-8
        summary = [
            f"Kept {len(step.I)} of {G.n} vertices, density {step.new_density:.6f} "
            f"(complement density was {step.complement_density:.3g})",
        ]
        ok = step.size_guarantee_met or not step.applicable
        return Outcome(report, summary, EXIT_OK if ok else EXIT_NOT_CERTIFIED, "ok" if ok else "unmet")

    if args.stage == "iterate":
        trace = density_increment_iterate(G, params)
        report.findings["trace"] = trace
        report.findings["trace_verified"] = trace.verify(G)
        summary = [f"{len(trace.steps) - 1} increment steps, halted by: {trace.halted_by}"]
        summary += [f"  n_i={s.n_i:<6} density {s.density:.6f}  {s.note}" for s in trace.steps]
        if trace.stalled:
            return Outcome(report, summary, EXIT_NOT_CERTIFIED, "stalled")
        return Outcome(report, summary)

    if args.stage == "balanced":
        result = extract_balanced(G, params.C)
        report.findings["balanced"] = result
        ok = result.balanced and result.size_bound_met and result.density_ok
        summary = [
            f"Kept {len(result.S)} of {G.n} vertices after {result.rounds} rounds (C={result.C:.4g})",
            f"balanced: {result.balanced}, size bound {result.size_bound:.4g} met: {result.size_bound_met}",
        ]
        return Outcome(report, summary, EXIT_OK if ok else EXIT_NOT_CERTIFIED, "ok" if ok else "unmet")

    chain = master_chain(G, params)
    report.findings["chain"] = {
        "stages": chain.stages,
        "trace": chain.trace,
        "clique": chain.clique,
        "clique_exact": chain.clique_exact,
        "target_size": chain.target_size,
        "unmet": chain.unmet,
    }
    summary = [f"Clique of size {len(chain.clique)} (target m^(1/2-30eps) = {chain.target_size:.4g})"]
    for stage in chain.stages:
        mark = "met" if stage.met else "UNMET"
        summary.append(f"  {stage.name:<20} |S|={len(stage.vertices):<6} density {stage.density:.6f} [{mark}] {stage.note}")
    # the clique size target is reported, never enforced
    if [name for name in chain.unmet if name != "clique"]:
        return Outcome(report, summary, EXIT_NOT_CERTIFIED, "unmet")
    return Outcome(report, summary)


def get_extract_commands() -> list[Command]:
    """Return all commands for subgraph extraction."""
    return [
        Command("extract", "density increment, balanced peeling and the master chain", configure, extract_command),
    ]
