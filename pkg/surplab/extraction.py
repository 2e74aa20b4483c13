"""Dense-subgraph extraction: spectral density increment, balanced peeling, clique pulling and the master chain."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from .config import settings
from .graph import (
    Graph,
    VertexSet,
    complement,
    densities_and_degrees,
    edge_density,
    induced_subgraph,
    is_clique,
    iter_bits,
)
from .params import PipelineParams
from .spectral import adjacency_spectrum, hadamard, psd_check

logger = logging.getLogger(__name__)

# Плотность, которую должен дать первый этап цепочки
STAGE1_DENSITY = 1 - 1e-5
STRICT_COMPLEMENT_DENSITY = 1e-5
MEMBERSHIP_SLACK = 1e-12


def lift(parent: VertexSet, child: VertexSet) -> VertexSet:
    """Map indices of an induced subgraph on `parent` back to the parent's labels."""
    return VertexSet(tuple(parent.members[i] for i in child))


# --- Density increment ---

@dataclass(frozen=True)
class IncrementStep:
    I: VertexSet
    new_density: float
    complement_density: float
    theta_E: float
    v1_floor: float
    applicable: bool
    size_guarantee_met: bool
    relaxed: bool
    diagnostics: dict[str, Any] = field(default_factory=dict)


def membership_holds(E_diag: np.ndarray, v1: np.ndarray, theta_E: float, v1_floor: float) -> np.ndarray:
    return (E_diag <= theta_E + MEMBERSHIP_SLACK) & (v1 >= v1_floor - MEMBERSHIP_SLACK)


def density_increment_step(G: Graph, params: PipelineParams) -> IncrementStep:
    """Select well-behaved vertices from the principal vector and the negative part E of A.

    I = {i : E_ii <= 4 tr(E)/n and v1(i) >= (1 - 8p)/sqrt(n)}. At most n/4
    vertices can break the first condition, whatever the size of n.
    """
    n = G.n
    if n < 4:
        raise ValueError(f"density_increment_step needs n >= 4, got {n}")
    p = 1 - edge_density(G)
    relaxed = p >= STRICT_COMPLEMENT_DENSITY
    if relaxed and params.strict:
        raise ValueError(f"complement density {p:.3g} >= {STRICT_COMPLEMENT_DENSITY} in strict mode")

    dec = adjacency_spectrum(G)
    lam1 = float(dec.eigenvalues[0])
    v1 = dec.eigenvectors[:, 0]
    B = G.adjacency - lam1 * np.outer(v1, v1)
    neg = dec.negative_indices()
    E = (dec.eigenvectors[:, neg] * np.abs(dec.eigenvalues[neg])) @ dec.eigenvectors[:, neg].T

    theta_E = 4 * float(np.trace(E)) / n
    v1_floor = (1 - 8 * p) / math.sqrt(n)
    mask = membership_holds(np.diag(E), v1, theta_E, v1_floor)
    I = VertexSet(tuple(int(i) for i in np.flatnonzero(mask)))

    idx = np.ix_(mask, mask)
    BI, EI = B[idx], E[idx]
    D = hadamard([B + E] * 3)
    ones = np.zeros(n)
    ones[mask] = 1.0
    diagnostics = {
        "B_cubed": float(np.sum(hadamard([BI, BI, BI]))),
        "BBE": 3 * float(np.sum(hadamard([BI, BI, EI]))),
        "BEE": 3 * float(np.sum(hadamard([BI, EI, EI]))),
        "E_cubed": float(np.sum(hadamard([EI, EI, EI]))),
        "quadratic_form": float(ones @ D @ ones),
        "D_psd": psd_check(D).psd,
    }

    applicable = p <= 0.1
    size_ok = len(I) >= n / 4
    if applicable and not size_ok:
        logger.warning(f"Density increment kept {len(I)} of {n} vertices despite dense input")
    new_density = edge_density(induced_subgraph(G, I)) if len(I) >= 2 else 0.0
    logger.debug(f"Increment step n={n} p={p:.4g}: |I|={len(I)} new density {new_density:.6f}")
    return IncrementStep(I, new_density, p, theta_E, v1_floor, applicable, size_ok, relaxed, diagnostics)


@dataclass(frozen=True)
class TraceStep:
    vertex_set: VertexSet
    n_i: int
    density: float
    note: str


@dataclass(frozen=True)
class ExtractionTrace:
    steps: tuple[TraceStep, ...]
    halted_by: str
    stalled: bool = False

    @property
    def final(self) -> TraceStep:
        return self.steps[-1]

    def verify(self, G: Graph, tol: float = 1e-12) -> bool:
        """Nesting is strict and every recorded density matches recomputation."""
        prev: TraceStep | None = None
        for step in self.steps:
            S = step.vertex_set
            if len(S) != step.n_i:
                return False
            if abs(edge_density(induced_subgraph(G, S)) - step.density) > tol:
                return False
            if prev is not None:
                if S.mask & ~prev.vertex_set.mask or len(S) >= len(prev.vertex_set):
                    return False
                if step.density < prev.density - tol:
                    return False
            prev = step
        return True


def iteration_floor(n: int, params: PipelineParams) -> float:
    return max(
        n ** ((1 + params.eps) / (1 + params.eps_aux)),
        n ** (params.alpha / params.alpha_aux),
        4.0,
    )


def iteration_cap(n: int) -> int:
    return 3 * math.ceil(math.log2(max(math.log2(max(n, 2)), 1.0))) + 3


def density_increment_iterate(G: Graph, params: PipelineParams) -> ExtractionTrace:
    n = G.n
    current = VertexSet(tuple(range(n)))
    steps = [TraceStep(current, n, edge_density(G), "start")]
    p_stop = n ** -params.alpha if n else 1.0
    floor = iteration_floor(n, params)
    cap = iteration_cap(n)

    while True:
        last = steps[-1]
        p_i = 1 - last.density
        if p_i < p_stop:
            return ExtractionTrace(tuple(steps), "complement density below n^-alpha")
        if last.n_i < floor:
            return ExtractionTrace(tuple(steps), "size below floor")
        if len(steps) - 1 >= cap:
            return ExtractionTrace(tuple(steps), "step cap")

        step = density_increment_step(induced_subgraph(G, current), params)
        if 1 - step.new_density >= p_i or len(step.I) < 2:
            logger.warning(f"Density increment stalled at n_i={last.n_i}, p_i={p_i:.4g}")
            return ExtractionTrace(tuple(steps), "stall", stalled=True)
        current = lift(current, step.I)
        steps.append(TraceStep(current, len(current), step.new_density, f"theta_E={step.theta_E:.4g}"))


# --- Balanced peeling ---

@dataclass(frozen=True)
class BalancedResult:
    H: Graph
    S: VertexSet
    C: float
    rounds: int
    balanced: bool
    size_bound: float
    size_bound_met: bool
    density_ok: bool


def extract_balanced(G: Graph, C: float | None = None) -> BalancedResult:
    """Repeatedly delete every vertex of degree >= C*d_i/2 until the average degree stops halving."""
    n = G.n
    C = 4 * math.log2(max(n, 2)) if C is None else C
    S = VertexSet(tuple(range(n)))
    H = G
    d_prev: float | None = None
    rounds = 0
    while H.n:
        d = densities_and_degrees(H).avg_degree
        if d == 0 or (d_prev is not None and d >= d_prev / 2):
            break
        keep = VertexSet(tuple(v for v, deg in enumerate(H.degrees) if deg < C * d / 2))
        if len(keep) == H.n:
            break
        S = lift(S, keep)
        H = induced_subgraph(H, keep)
        d_prev = d
        rounds += 1

    stats = densities_and_degrees(H)
    balanced = stats.max_degree <= C * stats.avg_degree + 1e-9
    size_bound = (1 - 2 * math.log2(max(n, 2)) / C) * n
    return BalancedResult(
        H, S, C, rounds, balanced,
        size_bound, len(S) >= size_bound - 1e-9,
        stats.edge_density <= edge_density(G) + 1e-12,
    )


# --- Cliques ---

@dataclass(frozen=True)
class CliqueResult:
    clique: VertexSet
    exact: bool


def degeneracy_order(G: Graph) -> list[int]:
    """Vertices in removal order of repeated min-degree peeling (ties: lowest index)."""
    alive = G.full_mask
    deg = list(G.degrees)
    order = []
    for _ in range(G.n):
        v = min(iter_bits(alive), key=lambda u: (deg[u], u))
        order.append(v)
        alive &= ~(1 << v)
        for u in iter_bits(G.rows[v] & alive):
            deg[u] -= 1
    return order


def _color_classes(cand: int, rows: list[int]) -> list[tuple[int, int]]:
    """Greedy sequential colouring; returns (vertex, colour) by non-decreasing colour."""
    out = []
    colour = 0
    uncoloured = cand
    while uncoloured:
        colour += 1
        q = uncoloured
        while q:
            low = q & -q
            v = low.bit_length() - 1
            q &= ~low & ~rows[v]
            uncoloured &= ~low
            out.append((v, colour))
    return out


def _exact_clique(G: Graph) -> int:
    order = degeneracy_order(G)[::-1]
    pos = {v: i for i, v in enumerate(order)}
    rows = [0] * G.n
    for v in range(G.n):
        for u in iter_bits(G.rows[v]):
            rows[pos[v]] |= 1 << pos[u]

    best = [0, 0]  # size, mask in relabelled indices

    def expand(size: int, clique: int, cand: int) -> None:
        for v, colour in reversed(_color_classes(cand, rows)):
            if size + colour <= best[0]:
                return
            bit = 1 << v
            nxt = cand & rows[v]
            if nxt:
                expand(size + 1, clique | bit, nxt)
            elif size + 1 > best[0]:
                best[0], best[1] = size + 1, clique | bit
            cand &= ~bit

    if G.n:
        expand(0, 0, (1 << G.n) - 1)
    return sum(1 << order[i] for i in iter_bits(best[1]))


def _greedy_clique(G: Graph, starts: int = 32) -> int:
    by_degree = sorted(range(G.n), key=lambda v: (-G.degrees[v], v))
    best = 0
    for v in by_degree[:starts]:
        clique = 1 << v
        cand = G.rows[v]
        while cand:
            u = max(iter_bits(cand), key=lambda w: ((G.rows[w] & cand).bit_count(), -w))
            clique |= 1 << u
            cand &= G.rows[u]
        if clique.bit_count() > best.bit_count():
            best = clique
    return improve_clique(G, best)


def improve_clique(G: Graph, clique: int, moves: int = 100) -> int:
    """Local search from a clique mask: add common neighbours, else make a plateau swap.

    A swap trades one member w for an outsider adjacent to every other member,
    picking the outsider that leaves the most common neighbours; an add after a
    swap gives a (1,2)-exchange. Swapped-out vertices are tabu for the rest of the run.
    """
    best = clique
    tabu = 0
    outside_all = G.full_mask
    for _ in range(moves):
        members = list(iter_bits(clique))
        common = outside_all & ~clique
        for w in members:
            common &= G.rows[w]
        if common:
            u = max(iter_bits(common), key=lambda x: ((G.rows[x] & common).bit_count(), -x))
            clique |= 1 << u
            if clique.bit_count() > best.bit_count():
                best = clique
            continue
        swap: tuple[int, int, int, int] | None = None
        for w in members:
            others = outside_all & ~clique
            for x in members:
                if x != w:
                    others &= G.rows[x]
            for v in iter_bits(others & ~tabu):
                key = ((others & G.rows[v]).bit_count(), -v, -w, v)
                if swap is None or key > swap:
                    swap = key
        if swap is None:
            break
        w, v = -swap[2], swap[3]
        clique = (clique & ~(1 << w)) | (1 << v)
        tabu |= 1 << w
    return best


def find_max_clique(G: Graph, limit_exact: int | None = None) -> CliqueResult:
    limit_exact = settings.CLIQUE_EXACT_LIMIT if limit_exact is None else limit_exact
    if G.n <= limit_exact:
        mask, exact = _exact_clique(G), True
    else:
        logger.warning(f"Clique search on n={G.n} > {limit_exact} is heuristic")
        mask, exact = _greedy_clique(G), False
    clique = VertexSet.from_mask(mask)
    if not is_clique(G, clique):
        raise AssertionError("clique search returned a non-clique")
    return CliqueResult(clique, exact)


@dataclass(frozen=True)
class CliquePull:
    cliques: tuple[VertexSet, ...]
    residual: VertexSet
    low_degree_removed: VertexSet
    target: int
    degree_floor: float
    exact: bool


def clique_target(n: int, params: PipelineParams) -> int:
    return max(params.clique_target, math.ceil(n ** (1 - params.delta))) if n else params.clique_target


def pull_cliques(G: Graph, params: PipelineParams) -> CliquePull:
    """Drop low-degree vertices once, then pull maximum cliques of at least the target size."""
    n = G.n
    target = clique_target(n, params)
    # a vertex of degree < target-1 cannot sit in a target clique
    floor = min(n ** (1 - 2 * params.eps), target - 1) if n else 0.0
    low = VertexSet(tuple(v for v in range(n) if G.degrees[v] < floor))
    remaining = VertexSet(tuple(v for v in range(n) if G.degrees[v] >= floor))

    cliques: list[VertexSet] = []
    exact = True
    while len(remaining) >= target:
        found = find_max_clique(induced_subgraph(G, remaining), params.clique_exact_limit)
        exact = exact and found.exact
        if len(found.clique) < target:
            break
        clique = lift(remaining, found.clique)
        cliques.append(clique)
        remaining = VertexSet.from_mask(remaining.mask & ~clique.mask)
        logger.debug(f"Pulled clique of size {len(clique)}, {len(remaining)} vertices left")
    logger.info(f"Pulled {len(cliques)} cliques (target {target}), residual {len(remaining)}")
    return CliquePull(tuple(cliques), remaining, low, target, floor, exact)


# --- Dense finders ---

DenseFinder = Callable[[Graph, float, int], Optional[VertexSet]]


def peel_dense(G: Graph, min_density: float, min_size: int) -> VertexSet | None:
    """Peel min-degree vertices; prefer the largest prefix meeting min_density, else the densest."""
    if G.n < min_size:
        return None
    order = degeneracy_order(G)
    best_meet: VertexSet | None = None
    best_dense: tuple[float, VertexSet] | None = None
    alive = G.full_mask
    edges = G.m
    for v in [None, *order]:
        if v is not None:
            edges -= (G.rows[v] & alive).bit_count()
            alive &= ~(1 << v)
        size = alive.bit_count()
        if size < min_size:
            break
        density = edges / (size * (size - 1) / 2) if size >= 2 else 0.0
        S = VertexSet.from_mask(alive)
        if best_meet is None and density >= min_density:
            best_meet = S
        if best_dense is None or density > best_dense[0]:
            best_dense = (density, S)
    if best_meet is not None:
        return best_meet
    return best_dense[1] if best_dense else None


def whole_graph(G: Graph, min_density: float, min_size: int) -> VertexSet | None:
    return VertexSet(tuple(range(G.n))) if G.n >= min_size else None


DENSE_FINDERS: dict[str, DenseFinder] = {
    "peel": peel_dense,
    "whole": whole_graph,
}


# --- Master chain ---

@dataclass(frozen=True)
class StageRecord:
    name: str
    vertices: VertexSet
    density: float
    target: float
    met: bool
    note: str = ""


@dataclass(frozen=True)
class MasterChainReport:
    stages: tuple[StageRecord, ...]
    trace: ExtractionTrace
    clique: VertexSet
    clique_exact: bool
    target_size: float

    @property
    def unmet(self) -> list[str]:
        return [s.name for s in self.stages if not s.met]


def master_chain(G: Graph, params: PipelineParams) -> MasterChainReport:
    """Dense finder, density increment, balanced complement peeling, clique search."""
    if params.dense_finder not in DENSE_FINDERS:
        raise ValueError(f"unknown dense_finder {params.dense_finder!r}")
    n = G.n
    stages: list[StageRecord] = []

    min_size = max(4, min(params.clique_target, n))
    found = DENSE_FINDERS[params.dense_finder](G, STAGE1_DENSITY, min_size)
    S1 = found if found is not None else VertexSet(tuple(range(n)))
    d1 = edge_density(induced_subgraph(G, S1))
    met1 = found is not None and d1 >= STAGE1_DENSITY
    if not met1:
        logger.warning(f"Stage 1 density {d1:.6f} below {STAGE1_DENSITY}")
    stages.append(StageRecord("dense_subgraph", S1, d1, STAGE1_DENSITY, met1, params.dense_finder))

    G1 = induced_subgraph(G, S1)
    trace = density_increment_iterate(G1, params)
    S2 = lift(S1, trace.final.vertex_set)
    n2 = len(S2)
    p_stop = len(S1) ** -params.alpha if len(S1) else 1.0
    stages.append(StageRecord(
        "density_increment", S2, trace.final.density, 1 - p_stop,
        1 - trace.final.density < p_stop, trace.halted_by,
    ))

    G2 = induced_subgraph(G, S2)
    balanced = extract_balanced(complement(G2), params.balance_for(n2))
    S3 = lift(S2, balanced.S)
    d3 = edge_density(induced_subgraph(G, S3))
    log_n2 = math.log2(max(n2, 2))
    target3 = 1 - log_n2 ** 2 * max(n2, 1) ** (2 * params.eps - 1)
    stages.append(StageRecord(
        "balanced_complement", S3, d3, target3, d3 >= target3 and balanced.balanced,
        f"C={balanced.C:.4g}, rounds={balanced.rounds}",
    ))

    found_clique = find_max_clique(induced_subgraph(G, S3), params.clique_exact_limit)
    clique = lift(S3, found_clique.clique)
    target_size = G.m ** (0.5 - 30 * params.eps) if G.m else 0.0
    stages.append(StageRecord(
        "clique", clique, 1.0 if len(clique) >= 2 else 0.0, target_size,
        len(clique) >= target_size, "exact" if found_clique.exact else "heuristic",
    ))
    logger.info(f"Master chain on n={n}: clique {len(clique)}, target {target_size:.3g}")
    return MasterChainReport(tuple(stages), trace, clique, found_clique.exact, target_size)
