"""Clique-union stability: rank-1 block rounding, block dichotomy, cherry audit and the full certificate."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Literal, Sequence

import numpy as np

from .extraction import CliquePull, pull_cliques
from .graph import (
    Graph,
    VertexSet,
    bipartite_edges,
    build_graph,
    clique_union,
    edit_distance_to_partition_cliques,
    is_clique,
    iter_bits,
)
from .params import PipelineParams
from .spectral import adjacency_spectrum

logger = logging.getLogger(__name__)

ALPHA_FLOOR = 1e-12

BlockLabel = Literal["Dense", "Sparse", "Ambiguous"]
Status = Literal["certified", "cherry_failure", "ambiguous_failure", "residual_too_large"]


# --- Rank-1 Boolean rounding ---

@dataclass(frozen=True)
class Rank1Rounding:
    x: np.ndarray
    y: np.ndarray
    error: int
    delta: float
    alpha: float
    degenerate: bool = False


def rank1_boolean_round(
    A: np.ndarray, u: np.ndarray, v: np.ndarray, alpha_floor: float = ALPHA_FLOOR
) -> Rank1Rounding:
    """Threshold a real rank-1 approximation uv^T of a 0/1 matrix into a rectangle xy^T."""
    A = np.asarray(A, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    rows, cols = A.shape
    if u.shape != (rows,) or v.shape != (cols,):
        raise ValueError(f"u, v must have lengths {rows}, {cols}")
    size = max(rows * cols, 1)
    # delta is measured against the signed approximation, thresholds use magnitudes
    delta = float(np.sum((A - np.outer(u, v)) ** 2)) / size
    u, v = np.abs(u), np.abs(v)

    nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    if nu == 0 or nv == 0:
        x = np.zeros(rows, dtype=np.int64)
        y = np.zeros(cols, dtype=np.int64)
        return Rank1Rounding(x, y, int(np.sum(A != 0)), delta, alpha_floor, degenerate=bool(A.any()))

    scale = np.sqrt(nv / nu)
    u, v = u * scale, v / scale
    alpha = max(delta ** (1 / 6), alpha_floor)
    x = (u >= alpha).astype(np.int64)
    y = (v >= alpha).astype(np.int64)
    error = int(np.sum(A != np.outer(x, y)))
    return Rank1Rounding(x, y, error, delta, alpha)


def top_singular_pair(M: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Leading singular vectors with sqrt(sigma) absorbed into each side."""
    M = np.asarray(M, dtype=np.float64)
    if M.size == 0:
        return np.zeros(M.shape[0]), np.zeros(M.shape[1]), 0.0
    U, s, Vt = np.linalg.svd(M)
    root = np.sqrt(s[0])
    return root * U[:, 0], root * Vt[0], float(s[0])


# --- Block classification ---

@dataclass(frozen=True)
class BlockRecord:
    i: int
    j: int
    edges: int
    density: float
    label: BlockLabel
    rectangle_error: int


@dataclass(frozen=True)
class BlockClassification:
    blocks: tuple[BlockRecord, ...]
    theta_lo: float
    theta_hi: float

    @property
    def ambiguous(self) -> list[BlockRecord]:
        return [b for b in self.blocks if b.label == "Ambiguous"]

    @property
    def dense_pairs(self) -> list[tuple[int, int]]:
        return [(b.i, b.j) for b in self.blocks if b.label == "Dense"]


def label_for(density: float, theta_lo: float, theta_hi: float) -> BlockLabel:
    if density >= theta_hi:
        return "Dense"
    if density <= theta_lo:
        return "Sparse"
    return "Ambiguous"


def classify_blocks(
    G: Graph,
    cliques: Sequence[VertexSet],
    theta_lo: float = 0.25,
    theta_hi: float = 0.75,
) -> BlockClassification:
    if not 0 <= theta_lo < theta_hi <= 1:
        raise ValueError(f"need 0 <= theta_lo < theta_hi <= 1, got {theta_lo}, {theta_hi}")
    seen = 0
    for C in cliques:
        C.check(G.n)
        if seen & C.mask:
            raise ValueError("cliques must be pairwise disjoint")
        seen |= C.mask

    blocks = []
    for i in range(len(cliques)):
        for j in range(i + 1, len(cliques)):
            Ci, Cj = cliques[i], cliques[j]
            edges = bipartite_edges(G, Ci, Cj)
            density = edges / (len(Ci) * len(Cj)) if len(Ci) and len(Cj) else 0.0
            block = G.adjacency[np.ix_(list(Ci), list(Cj))]
            u, v, _ = top_singular_pair(block)
            rounding = rank1_boolean_round(block, u, v)
            blocks.append(BlockRecord(i, j, edges, density, label_for(density, theta_lo, theta_hi), rounding.error))
    return BlockClassification(tuple(blocks), theta_lo, theta_hi)


@dataclass(frozen=True)
class CliqueGraph:
    gamma: Graph
    cliques: tuple[VertexSet, ...]


def build_clique_graph(blocks: BlockClassification, cliques: Sequence[VertexSet]) -> CliqueGraph:
    return CliqueGraph(build_graph(blocks.dense_pairs, len(cliques)), tuple(cliques))


# --- Cherries ---

@dataclass(frozen=True)
class CherryAudit:
    cherry_free: bool
    witness: tuple[int, int, int] | None = None
    clusters: tuple[VertexSet, ...] | None = None


def find_cherry(gamma: Graph) -> tuple[int, int, int] | None:
    """Lexicographically smallest (i, j, k) with ij, jk edges and ik a non-edge."""
    for i in range(gamma.n):
        for j in iter_bits(gamma.rows[i]):
            missing = gamma.rows[j] & ~gamma.rows[i] & ~(1 << i)
            if missing:
                k = (missing & -missing).bit_length() - 1
                return i, j, k
    return None


def connected_components(G: Graph) -> list[VertexSet]:
    left = G.full_mask
    out = []
    while left:
        seed = left & -left
        comp = seed
        frontier = seed
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                reach |= G.rows[v]
            frontier = reach & ~comp
            comp |= frontier
        out.append(VertexSet.from_mask(comp))
        left &= ~comp
    return out


def cherry_audit(gamma: Graph | CliqueGraph) -> CherryAudit:
    graph = gamma.gamma if isinstance(gamma, CliqueGraph) else gamma
    witness = find_cherry(graph)
    if witness is not None:
        return CherryAudit(False, witness)
    clusters = connected_components(graph)
    for cluster in clusters:
        if not is_clique(graph, cluster):
            raise AssertionError(f"cherry-free graph has a non-complete component {cluster.members}")
    return CherryAudit(True, None, tuple(clusters))


# --- Full certificate ---

@dataclass(frozen=True)
class EigenGate:
    lambda_min_abs: float
    surplus_bound: float


@dataclass(frozen=True)
class StabilityReport:
    status: Status
    failure: dict[str, Any]
    pull: CliquePull
    blocks: BlockClassification
    gamma: CliqueGraph
    clusters: tuple[tuple[int, ...], ...]
    parts: tuple[VertexSet, ...]
    absorbed: tuple[int, ...]
    model: Graph | None
    edit_distance: int | None
    closeness: float | None
    uncovered_edges: int
    eigen_gate: EigenGate
    notes: tuple[str, ...] = field(default=())

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def absorb_residual(
    G: Graph, parts: Sequence[VertexSet], residual: VertexSet, theta_lo: float, theta_hi: float
) -> dict[int, int]:
    """Residual vertex -> part index, when it is dense into exactly that part and sparse elsewhere."""
    placed: dict[int, int] = {}
    for r in residual:
        dens = [(G.rows[r] & P.mask).bit_count() / len(P) for P in parts]
        dense = [a for a, d in enumerate(dens) if d >= theta_hi]
        if len(dense) == 1 and all(d <= theta_lo for a, d in enumerate(dens) if a != dense[0]):
            placed[r] = dense[0]
    return placed


def stability_certificate(G: Graph, params: PipelineParams) -> StabilityReport:
    """Pull cliques, absorb the residual, classify blocks, cluster through Γ and measure the edit distance.

    Absorbed residual vertices travel with their clique from here on, so the
    uncovered-edge gate, the blocks and the clusters all see the grown groups.
    """
    n = G.n
    pull = pull_cliques(G, params)
    pulled = 0
    for C in pull.cliques:
        pulled |= C.mask
    residual = VertexSet.from_mask(G.full_mask & ~pulled)
    placed = (
        absorb_residual(G, pull.cliques, residual, params.theta_lo, params.theta_hi)
        if params.absorb_residual else {}
    )
    masks = [C.mask for C in pull.cliques]
    for r, a in placed.items():
        masks[a] |= 1 << r
    groups = [VertexSet.from_mask(m) for m in masks]
    covered = pulled
    for r in placed:
        covered |= 1 << r
    uncovered = G.m - G.edges_within(covered)

    blocks = classify_blocks(G, groups, params.theta_lo, params.theta_hi)
    gamma = build_clique_graph(blocks, groups)
    lam_n = float(adjacency_spectrum(G).eigenvalues[-1]) if n else 0.0
    gate = EigenGate(abs(lam_n), abs(lam_n) * n / 4)
    notes = ("closeness normalized by n^2 over all vertices; residual vertices are singleton parts",)

    def failed(status: Status, failure: dict[str, Any]) -> StabilityReport:
        logger.info(f"Stability pipeline not certified: {status} {failure}")
        return StabilityReport(
            status, failure, pull, blocks, gamma, (), (), tuple(sorted(placed)),
            None, None, None, uncovered, gate, notes,
        )

    if uncovered > params.max_uncovered_fraction * G.m:
        return failed("residual_too_large", {
            "uncovered_edges": uncovered,
            "allowed": params.max_uncovered_fraction * G.m,
            "cliques": len(groups),
        })
    if blocks.ambiguous:
        first = blocks.ambiguous[0]
        return failed("ambiguous_failure", {"pair": [first.i, first.j], "density": first.density})
    audit = cherry_audit(gamma)
    if not audit.cherry_free:
        return failed("cherry_failure", {"witness": list(audit.witness)})

    clusters = tuple(c.members for c in audit.clusters or ())
    parts = []
    for cluster in clusters:
        mask = 0
        for idx in cluster:
            mask |= groups[idx].mask
        parts.append(VertexSet.from_mask(mask))
    n_clusters = len(parts)
    parts.extend(VertexSet((r,)) for r in residual if r not in placed)

    distance = edit_distance_to_partition_cliques(G, parts)
    model = clique_union(n, parts)
    closeness = distance / (n * n) if n else 0.0
    logger.info(f"Stability certified: {n_clusters} clusters, edit distance {distance}, closeness {closeness:.4g}")
    return StabilityReport(
        "certified", {}, pull, blocks, gamma, clusters, tuple(parts), tuple(sorted(placed)),
        model, distance, closeness, uncovered, gate, notes,
    )
