"""Argument helpers shared across commands."""
from __future__ import annotations

import argparse
import json
from typing import Any

from ..config import settings
from ..generators import GraphSpec, generate
from ..graph import Graph, VertexSet, read_graph
from ..params import PipelineParams
from . import UsageError

PARAM_FIELDS = (
    "eps", "alpha", "delta", "C", "exact_limit", "clique_exact_limit", "clique_target",
    "dense_finder", "theta_lo", "theta_hi", "max_uncovered_fraction", "absorb_residual",
    "eps0", "alpha0", "strict",
)
FLAG_NAMES = {"absorb_residual": "--no-absorb"}


def flag_for(name: str) -> str:
    return FLAG_NAMES.get(name, "--" + name.replace("_", "-"))


def add_graph_input(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("graph", nargs="?", help="graph file (`n N` header, `u v` edge lines)")
    parser.add_argument(
        "--spec", metavar="JSON",
        help='generate the input instead, e.g. \'{"family": "gnp", "params": {"n": 20, "p": 0.5}, "seed": 1}\'',
    )
    parser.set_defaults(graph_required=required)


def parse_spec(text: str) -> GraphSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"--spec: invalid JSON ({e.msg} at column {e.colno})") from None
    if not isinstance(data, dict):
        raise UsageError("--spec: expected a JSON object")
    return GraphSpec.from_dict(data)


def load_graph(args: argparse.Namespace) -> Graph | None:
    if args.graph and args.spec:
        raise UsageError("give either a graph file or --spec, not both")
    if args.spec:
        return generate(parse_spec(args.spec))
    if args.graph:
        return read_graph(args.graph)
    if args.graph_required:
        raise UsageError("missing input: give a graph file or --spec")
    return None


def add_param_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pipeline parameters")
    group.add_argument("--eps", type=float, help=f"epsilon (default {settings.EPS})")
    group.add_argument("--alpha", type=float, help=f"alpha (default {settings.ALPHA})")
    group.add_argument("--delta", type=float, help=f"clique exponent delta (default {settings.DELTA})")
    group.add_argument("--C", type=float, help="balance parameter (default 4*log2 n)")
    group.add_argument("--exact-limit", type=int, help=f"largest n for exact MaxCut (default {settings.EXACT_LIMIT})")
    group.add_argument("--clique-exact-limit", type=int, help=f"largest n for exact clique search (default {settings.CLIQUE_EXACT_LIMIT})")
    group.add_argument("--clique-target", type=int, help=f"minimum pulled clique size (default {settings.CLIQUE_TARGET})")
    group.add_argument("--dense-finder", help=f"dense subgraph strategy (default {settings.DENSE_FINDER})")
    group.add_argument("--theta-lo", type=float, help=f"sparse block threshold (default {settings.THETA_LO})")
    group.add_argument("--theta-hi", type=float, help=f"dense block threshold (default {settings.THETA_HI})")
    group.add_argument("--max-uncovered-fraction", type=float, help="uncovered-edge gate (fraction of m)")
    group.add_argument("--no-absorb", dest="absorb_residual", action="store_const", const=False,
                       help="keep every residual vertex as a singleton part")
    group.add_argument("--eps0", type=float, help="auxiliary epsilon of the iteration floor (default 1.1*eps)")
    group.add_argument("--alpha0", type=float, help="auxiliary alpha of the iteration floor (default 1.1*alpha)")
    group.add_argument("--strict", action="store_const", const=True,
                       help="reject density increment steps on complement density >= 1e-5")


def params_from_args(args: argparse.Namespace) -> PipelineParams:
    changes = {name: getattr(args, name, None) for name in PARAM_FIELDS}
    try:
        return PipelineParams().with_overrides(**changes)
    except ValueError as e:
        message = str(e)
        culprit = message.split()[0] if message else ""
        if changes.get(culprit) is not None:
            raise UsageError(f"{flag_for(culprit)}: {message}") from None
        raise UsageError(message) from None


def parse_vertex_list(text: str, flag: str) -> VertexSet:
    try:
        members = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"{flag}: expected comma separated vertex indices, got {text!r}") from None
    return VertexSet.of(members)


def graph_summary(G: Graph) -> dict[str, Any]:
    return {"n": G.n, "m": G.m, "digest": G.digest}
