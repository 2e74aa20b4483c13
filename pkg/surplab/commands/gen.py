"""`gen`: write a seeded graph from one of the generator families."""
from __future__ import annotations

import argparse
import json
import logging

from ..generators import FAMILIES, GraphSpec, generate
from ..graph import format_graph, write_graph
from ..report import Report
from . import Command, Outcome, UsageError
from .common import graph_summary, parse_spec

logger = logging.getLogger(__name__)


def configure(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec", metavar="JSON", help="full generator spec as a JSON object")
    source.add_argument("--family", choices=sorted(FAMILIES), help="family name; parameters via --param")
    parser.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                        help="family parameter, VALUE parsed as JSON (e.g. n=20, p=0.5, sizes=[5,5])")
    parser.add_argument("-o", "--output", metavar="PATH", help="graph file to write (default: stdout)")


def _parse_params(items: list[str]) -> dict:
    params = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param: expected KEY=VALUE, got {item!r}")
        try:
            params[key] = json.loads(raw)
        except json.JSONDecodeError:
            params[key] = raw
    return params


def gen_command(args: argparse.Namespace) -> Outcome:
    if args.spec:
        if args.param:
            raise UsageError("--param only applies together with --family")
        spec = parse_spec(args.spec)
    else:
        spec = GraphSpec(args.family, _parse_params(args.param), args.seed)
    G = generate(spec)

    report = Report("gen", G.digest)
    report.findings = {"graph": graph_summary(G), "spec": spec.to_dict()}
    if args.output:
        write_graph(G, args.output)
        logger.info(f"Wrote {spec.family} graph (n={G.n}, m={G.m}) to {args.output}")
        return Outcome(report, [f"Wrote {spec.family} graph with n={G.n}, m={G.m} to {args.output}"])
    return Outcome(report, format_graph(G).splitlines())


def get_gen_commands() -> list[Command]:
    """Return all commands for graph generation."""
    return [
        Command("gen", "generate a seeded graph", configure, gen_command),
    ]
