"""`spectrum`: eigenvalues, power sums and the interlacing checks of one graph."""
from __future__ import annotations

import argparse
import logging

from ..report import Report
from ..spectral import (
    adjacency_spectrum,
    power_sums,
    principal_vector_check,
    spectrum_symmetry_gap,
    weyl_check,
)
from . import EXIT_NOT_CERTIFIED, Command, Outcome, UsageError
from .common import add_graph_input, graph_summary, load_graph

logger = logging.getLogger(__name__)


def configure(parser: argparse.ArgumentParser) -> None:
    add_graph_input(parser)
    parser.add_argument("--eigenvectors", action="store_true", help="include eigenvectors in the JSON report")


def spectrum_command(args: argparse.Namespace) -> Outcome:
    G = load_graph(args)
    if G.n < 1:
        raise UsageError("spectrum needs at least one vertex")
    dec = adjacency_spectrum(G)
    sums = power_sums(dec, G)
    principal = principal_vector_check(G, dec)
    weyl = weyl_check(G) if G.n >= 2 else None

    spectrum = {
        "eigenvalues": dec.eigenvalues,
        "solver": dec.solver,
        "sweeps": dec.sweeps,
        "max_residual": dec.max_residual,
        "power_sums": sums,
        "principal_vector": principal,
        "weyl": weyl,
        "symmetry_gap": spectrum_symmetry_gap(dec),
    }
    if args.eigenvectors:
        spectrum["eigenvectors"] = dec.eigenvectors
    report = Report("spectrum", G.digest)
    report.findings = {"graph": graph_summary(G), "spectrum": spectrum}
    report.tolerances = {
        "residual": dec.residual_tol,
        "classification": dec.classification_tol(),
        "power_sums": sums.tolerance,
        "principal_vector": 1e-9,
        "weyl": weyl.tol if weyl else 0.0,
    }

    lam = dec.eigenvalues
    summary = [
        f"lambda_1 = {lam[0]:.10g}, lambda_n = {lam[-1]:.10g} ({dec.solver}, {dec.sweeps} sweeps)",
        f"P1 {sums.P1:.6g}  P2 {sums.P2:.6g}  P3 {sums.P3:.6g}  N1 {sums.N1:.6g}  N2 {sums.N2:.6g}  N3 {sums.N3:.6g}",
    ]
    ok = True
    if weyl is not None:
        summary.append(f"Weyl interlacing: max slack {weyl.max_slack:.3g} ({'ok' if weyl.ok else 'VIOLATED'})")
        ok = weyl.ok
    if principal.applicable:
        summary.append(f"Principal vector bounds: {len(principal.violations)} violations")
        ok = ok and not principal.violations
    if not ok:
        return Outcome(report, summary, EXIT_NOT_CERTIFIED, "not_certified")
    return Outcome(report, summary)


def get_spectrum_commands() -> list[Command]:
    """Return all commands for spectral analysis."""
    return [
        Command("spectrum", "adjacency spectrum and power-sum identities", configure, spectrum_command),
    ]
