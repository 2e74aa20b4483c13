"""Seed-deterministic graph families.

Randomness comes from numpy's counter-based Philox bit generator keyed by the
spec seed. gnp draws one uniform per unordered pair, pairs taken in
lexicographic order; perturbed_clique_union draws one uniform per pair and
toggles the pairs holding the k smallest draws.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .graph import Graph, VertexSet, build_graph, clique_union

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64 - 1


class SpecError(ValueError):
    def __init__(self, field_name: str, message: str) -> None:
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass(frozen=True)
class GraphSpec:
    family: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> GraphSpec:
        if "family" not in data:
            raise SpecError("family", "missing")
        params = dict(data.get("params", {}))
        params.update({k: v for k, v in data.items() if k not in ("family", "params", "seed")})
        return cls(str(data["family"]), params, int(data.get("seed", 0)))

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.family, "params": dict(self.params), "seed": self.seed}


def philox(seed: int) -> np.random.Generator:
    if not 0 <= seed <= MAX_SEED:
        raise SpecError("seed", f"must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(key=seed))


def sample_indices(rng: np.random.Generator, population: int, k: int) -> np.ndarray:
    """k distinct indices of range(population): positions of the k smallest uniform draws."""
    if not 0 <= k <= population:
        raise ValueError(f"cannot draw {k} distinct indices from {population}")
    return np.argsort(rng.random(population), kind="stable")[:k]


def _count(params: dict[str, Any], name: str, minimum: int = 0) -> int:
    if name not in params:
        raise SpecError(name, "missing")
    value = params[name]
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < minimum:
        raise SpecError(name, f"must be an integer >= {minimum}, got {value!r}")
    return int(value)


def _sizes(params: dict[str, Any]) -> list[int]:
    sizes = params.get("sizes")
    if not isinstance(sizes, (list, tuple)) or not sizes:
        raise SpecError("sizes", f"must be a non-empty list of counts, got {sizes!r}")
    for s in sizes:
        if isinstance(s, bool) or not isinstance(s, (int, np.integer)) or s < 1:
            raise SpecError("sizes", f"every size must be an integer >= 1, got {s!r}")
    return [int(s) for s in sizes]


def _from_pairs(n: int, keep: np.ndarray) -> Graph:
    iu, ju = np.triu_indices(n, 1)
    return build_graph(zip(iu[keep].tolist(), ju[keep].tolist()), n)


def block_parts(sizes: list[int]) -> list[VertexSet]:
    parts, start = [], 0
    for s in sizes:
        parts.append(VertexSet(tuple(range(start, start + s))))
        start += s
    return parts


def gnp(params: dict[str, Any], seed: int) -> Graph:
    n = _count(params, "n")
    p = params.get("p")
    if not isinstance(p, (int, float)) or isinstance(p, bool) or not 0 <= p <= 1:
        raise SpecError("p", f"must lie in [0, 1], got {p!r}")
    draws = philox(seed).random(n * (n - 1) // 2)
    return _from_pairs(n, draws < p)


def complete(params: dict[str, Any], seed: int) -> Graph:
    n = _count(params, "n")
    return _from_pairs(n, np.ones(n * (n - 1) // 2, dtype=bool))


def empty(params: dict[str, Any], seed: int) -> Graph:
    n = _count(params, "n")
    return Graph(n, (0,) * n)


def disjoint_cliques(params: dict[str, Any], seed: int) -> Graph:
    sizes = _sizes(params)
    return clique_union(sum(sizes), block_parts(sizes))


def perturbed_clique_union(params: dict[str, Any], seed: int) -> Graph:
    """Disjoint cliques with exactly `flips` distinct vertex pairs toggled."""
    sizes = _sizes(params)
    flips = _count(params, "flips")
    base = clique_union(sum(sizes), block_parts(sizes))
    n = base.n
    pairs = n * (n - 1) // 2
    if flips > pairs:
        raise SpecError("flips", f"at most {pairs} pairs exist, got {flips}")
    chosen = sample_indices(philox(seed), pairs, flips)
    iu, ju = np.triu_indices(n, 1)
    rows = list(base.rows)
    for idx in chosen.tolist():
        u, v = int(iu[idx]), int(ju[idx])
        rows[u] ^= 1 << v
        rows[v] ^= 1 << u
    return Graph(n, tuple(rows))


def two_clique_graph(a: int, b: int, c: int) -> Graph:
    """Cliques on A+C and B+C with A = [0,a), B = [a,a+b), C = [a+b,a+b+c)."""
    n = a + b + c
    shared = list(range(a + b, n))
    edges = []
    for members in (list(range(0, a)) + shared, list(range(a, a + b)) + shared):
        edges.extend((u, v) for i, u in enumerate(members) for v in members[i + 1:])
    return build_graph(edges, n)


def two_overlapping_cliques(params: dict[str, Any], seed: int) -> Graph:
    return two_clique_graph(_count(params, "a"), _count(params, "b"), _count(params, "c"))


def complete_bipartite(params: dict[str, Any], seed: int) -> Graph:
    a, b = _count(params, "a"), _count(params, "b")
    return build_graph(((u, a + v) for u in range(a) for v in range(b)), a + b)


def turan(params: dict[str, Any], seed: int) -> Graph:
    n = _count(params, "n")
    r = _count(params, "r", minimum=1)
    sizes = [n // r + (1 if i < n % r else 0) for i in range(r)]
    part_of = [i for i, s in enumerate(sizes) for _ in range(s)]
    return build_graph(((u, v) for u in range(n) for v in range(u + 1, n) if part_of[u] != part_of[v]), n)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def paley(params: dict[str, Any], seed: int) -> Graph:
    q = _count(params, "q")
    if not _is_prime(q) or q % 4 != 1:
        raise SpecError("q", f"must be a prime congruent to 1 mod 4, got {q}")
    residues = {x * x % q for x in range(1, q)}
    return build_graph(((u, v) for u in range(q) for v in range(u + 1, q) if (v - u) % q in residues), q)


def clique_minus_matching(params: dict[str, Any], seed: int) -> Graph:
    n = _count(params, "n")
    return build_graph(
        ((u, v) for u in range(n) for v in range(u + 1, n) if not (u % 2 == 0 and v == u + 1)), n
    )


FAMILIES: dict[str, Callable[[dict[str, Any], int], Graph]] = {
    "gnp": gnp,
    "complete": complete,
    "empty": empty,
    "disjoint_cliques": disjoint_cliques,
    "perturbed_clique_union": perturbed_clique_union,
    "two_overlapping_cliques": two_overlapping_cliques,
    "complete_bipartite": complete_bipartite,
    "turan": turan,
    "paley": paley,
    "clique_minus_matching": clique_minus_matching,
}


def generate(spec: GraphSpec) -> Graph:
    builder = FAMILIES.get(spec.family)
    if builder is None:
        raise SpecError("family", f"unknown family {spec.family!r}")
    philox(spec.seed)  # seed range check for every family
    G = builder(spec.params, spec.seed)
    logger.debug(f"Generated {spec.family} with n={G.n}, m={G.m}")
    return G
