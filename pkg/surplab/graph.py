"""Simple undirected graphs on packed bit rows, cuts and clique-union edit distance."""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

logger = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Malformed graph input; `line` is 1-based when the error comes from text."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class VertexSet:
    """Strictly increasing tuple of vertex indices."""

    members: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        prev = -1
        for v in self.members:
            if v <= prev:
                raise ValueError(f"vertex set must be strictly increasing, got {self.members}")
            prev = v

    @classmethod
    def of(cls, vertices: Iterable[int]) -> VertexSet:
        return cls(tuple(sorted(set(int(v) for v in vertices))))

    @classmethod
    def from_mask(cls, mask: int) -> VertexSet:
        return cls(tuple(iter_bits(mask)))

    @cached_property
    def mask(self) -> int:
        out = 0
        for v in self.members:
            out |= 1 << v
        return out

    def check(self, n: int) -> None:
        if self.members and (self.members[0] < 0 or self.members[-1] >= n):
            raise ValueError(f"vertex set {self.members} out of range for n={n}")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v and bool(self.mask >> v & 1)


@dataclass(frozen=True)
class Cut:
    """Bipartition given as a 0/1 side per vertex."""

    side: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(s not in (0, 1) for s in self.side):
            raise ValueError("cut sides must be 0 or 1")

    @classmethod
    def from_mask(cls, mask: int, n: int) -> Cut:
        return cls(tuple((mask >> v) & 1 for v in range(n)))

    @cached_property
    def mask(self) -> int:
        """Bitmask of vertices on side 1."""
        out = 0
        for v, s in enumerate(self.side):
            if s:
                out |= 1 << v
        return out

    def __len__(self) -> int:
        return len(self.side)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph; rows[v] is the neighbourhood bitmask of v."""

    n: int
    rows: tuple[int, ...]
    m: int = field(init=False)

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} adjacency rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        degree_sum = 0
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError(f"row {v} references vertices >= n")
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            for u in iter_bits(row):
                if not self.rows[u] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at ({v},{u})")
            degree_sum += row.bit_count()
        object.__setattr__(self, "m", degree_sum // 2)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(row.bit_count() for row in self.rows)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense 0/1 float adjacency matrix (read-only)."""
        a = np.zeros((self.n, self.n), dtype=np.float64)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1.0
        a.setflags(write=False)
        return a

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(format_graph(self).encode()).hexdigest()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet.from_mask(self.rows[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.rows):
            for v in iter_bits(row >> (u + 1)):
                yield u, u + 1 + v

    def edges_within(self, mask: int) -> int:
        return sum((self.rows[v] & mask).bit_count() for v in iter_bits(mask)) // 2


def build_graph(edge_list: Iterable[Sequence[int]], n_hint: int | None = None) -> Graph:
    """Build a graph from index pairs; duplicates collapse, self-loops are rejected."""
    pairs = [(int(u), int(v)) for u, v in edge_list]
    for u, v in pairs:
        if u < 0 or v < 0:
            raise GraphFormatError(f"negative vertex index in ({u},{v})")
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}")
    if n_hint is None:
        n = 1 + max((max(u, v) for u, v in pairs), default=-1)
    else:
        n = n_hint
        for u, v in pairs:
            if max(u, v) >= n:
                raise GraphFormatError(f"edge ({u},{v}) exceeds declared n={n}")
    rows = [0] * n
    for u, v in pairs:
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def complement(G: Graph) -> Graph:
    full = G.full_mask
    return Graph(G.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(G.rows)))


def induced_subgraph(G: Graph, S: VertexSet) -> Graph:
    """Subgraph on S, relabelled 0..|S|-1 in S's order."""
    S.check(G.n)
    index = {v: i for i, v in enumerate(S)}
    rows = []
    for v in S:
        row = 0
        for u in iter_bits(G.rows[v] & S.mask):
            row |= 1 << index[u]
        rows.append(row)
    return Graph(len(S), tuple(rows))


@dataclass(frozen=True)
class DegreeStats:
    edge_density: float
    max_degree: int
    avg_degree: float


def densities_and_degrees(G: Graph) -> DegreeStats:
    pairs = G.n * (G.n - 1) // 2
    return DegreeStats(
        edge_density=G.m / pairs if G.n >= 2 else 0.0,
        max_degree=max(G.degrees, default=0),
        avg_degree=2 * G.m / G.n if G.n else 0.0,
    )


def edge_density(G: Graph) -> float:
    return densities_and_degrees(G).edge_density


@dataclass(frozen=True)
class CutValue:
    cut_size: int
    surplus: float


def cut_size(G: Graph, mask: int) -> int:
    """Edges crossing the cut whose side-1 vertices are `mask`."""
    outside = G.full_mask & ~mask
    return sum((G.rows[v] & outside).bit_count() for v in iter_bits(mask))


def cut_evaluate(G: Graph, c: Cut) -> CutValue:
    if len(c) != G.n:
        raise ValueError(f"cut has length {len(c)}, graph has {G.n} vertices")
    size = cut_size(G, c.mask)
    return CutValue(cut_size=size, surplus=size - G.m / 2)


def bipartite_edges(G: Graph, U: VertexSet, V: VertexSet) -> int:
    U.check(G.n)
    V.check(G.n)
    if U.mask & V.mask:
        raise ValueError("bipartite_edges needs disjoint vertex sets")
    return sum((G.rows[u] & V.mask).bit_count() for u in U)


def triangle_count(G: Graph) -> int:
    total = 0
    for u, v in G.edges():
        total += (G.rows[u] & G.rows[v]).bit_count()
    return total // 3


def is_clique(G: Graph, S: VertexSet) -> bool:
    return all((G.rows[v] | 1 << v) & S.mask == S.mask for v in S)


def _check_partition(n: int, parts: Sequence[VertexSet]) -> None:
    seen = 0
    for part in parts:
        part.check(n)
        if seen & part.mask:
            raise ValueError("parts overlap")
        seen |= part.mask
    if seen != (1 << n) - 1:
        raise ValueError("parts do not cover every vertex")


def edit_distance_to_partition_cliques(G: Graph, parts: Sequence[VertexSet]) -> int:
    """Missing within-part pairs plus present cross-part edges."""
    _check_partition(G.n, parts)
    within_pairs = 0
    within_edges = 0
    for part in parts:
        k = len(part)
        within_pairs += k * (k - 1) // 2
        within_edges += G.edges_within(part.mask)
    cross_edges = G.m - within_edges
    return (within_pairs - within_edges) + cross_edges


def clique_union(n: int, parts: Sequence[VertexSet]) -> Graph:
    """Disjoint union of cliques on the given parts (parts must partition [n])."""
    _check_partition(n, parts)
    rows = [0] * n
    for part in parts:
        for v in part:
            rows[v] = part.mask & ~(1 << v)
    return Graph(n, tuple(rows))


# --- Text format ---

def parse_graph(text: str) -> Graph:
    """Parse `n <N>` header (optional), `u v` edge lines and `#` comments."""
    n_hint: int | None = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if n_hint is not None or pairs:
                raise GraphFormatError("header must come first and only once", lineno)
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise GraphFormatError(f"bad header {line!r}", lineno)
            n_hint = int(tokens[1])
            continue
        if len(tokens) != 2:
            raise GraphFormatError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"negative vertex in {line!r}", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if n_hint is not None and max(u, v) >= n_hint:
            raise GraphFormatError(f"vertex {max(u, v)} exceeds declared n={n_hint}", lineno)
        pairs.append((u, v))
    return build_graph(pairs, n_hint)


def format_graph(G: Graph) -> str:
    lines = [f"n {G.n}"]
    lines.extend(f"{u} {v}" for u, v in G.edges())
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path) -> Graph:
    logger.debug(f"Reading graph from {path}")
    return parse_graph(Path(path).read_text())


def write_graph(G: Graph, path: str | Path) -> None:
    Path(path).write_text(format_graph(G))
