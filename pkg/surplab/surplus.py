"""MaxCut oracles, the surplus and its lower-bound certificates."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from .config import settings
from .generators import two_clique_graph
from .graph import (
    Cut,
    Graph,
    VertexSet,
    bipartite_edges,
    complement,
    cut_evaluate,
    densities_and_degrees,
)
from .spectral import adjacency_spectrum, psd_check

logger = logging.getLogger(__name__)

CHUNK_BITS = 16

CertificateKind = Literal[
    "NegEigenSum", "NegEigenSquares", "NegEigenCubes", "LowRankFactor", "ExplicitCut", "BiasedCut"
]


class OracleLimitError(ValueError):
    def __init__(self, n: int, limit: int) -> None:
        self.n = n
        self.limit = limit
        super().__init__(
            f"exact MaxCut refused for n={n} (limit {limit}); use maxcut_local_search instead"
        )


@dataclass(frozen=True)
class MaxCutResult:
    value: int
    cut: Cut
    method: Literal["exact", "local_search"]
    exact: bool
    surplus: float


# --- Exhaustive oracle ---

def _chunk_best(adj: np.ndarray, deg: np.ndarray, n: int, start: int, stop: int) -> tuple[int, int]:
    codes = np.arange(start, stop, dtype=np.int64)
    # vertex v sits on bit n-1-v so integer order is lexicographic side order
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    X = ((codes[:, None] >> shifts) & 1).astype(np.float64)
    values = X @ deg - np.einsum("ij,ij->i", X @ adj, X)
    best = int(np.argmax(values))
    return int(round(values[best])), int(codes[best])


def maxcut_exact(G: Graph, limit: int | None = None, workers: int | None = None) -> MaxCutResult:
    """Exhaustive maximum over the 2^(n-1) cuts with vertex 0 on side 0."""
    limit = settings.EXACT_LIMIT if limit is None else limit
    workers = settings.WORKERS if workers is None else workers
    n = G.n
    if n > limit:
        raise OracleLimitError(n, limit)
    if n == 0:
        return MaxCutResult(0, Cut(()), "exact", True, 0.0)

    adj = G.adjacency
    deg = np.asarray(G.degrees, dtype=np.float64)
    total = 1 << (n - 1)
    step = 1 << CHUNK_BITS
    bounds = [(lo, min(lo + step, total)) for lo in range(0, total, step)]

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda b: _chunk_best(adj, deg, n, *b), bounds))
    else:
        results = [_chunk_best(adj, deg, n, lo, hi) for lo, hi in bounds]

    best_value, best_code = results[0]
    for value, code in results[1:]:
        if value > best_value:
            best_value, best_code = value, code
    side = tuple((best_code >> (n - 1 - v)) & 1 for v in range(n))
    logger.debug(f"Exact MaxCut on n={n}: {best_value} over {total} cuts")
    return MaxCutResult(best_value, Cut(side), "exact", True, best_value - G.m / 2)


# --- Local search ---

def _polish(adj: np.ndarray, x: np.ndarray, max_passes: int) -> np.ndarray:
    """1-flip hill climbing on a +-1 vector; flips v while x_v (Ax)_v > 0."""
    x = x.copy()
    field_ = adj @ x
    for _ in range(max_passes):
        improved = False
        for v in range(x.shape[0]):
            if x[v] * field_[v] > 0:
                x[v] = -x[v]
                field_ += 2 * x[v] * adj[:, v]
                improved = True
        if not improved:
            break
    return x


def _greedy_balanced(G: Graph) -> np.ndarray:
    """Each vertex joins the side holding fewer of its already placed neighbours."""
    side = np.zeros(G.n, dtype=np.int64)
    placed_one = 0
    placed = 0
    for v in range(G.n):
        row = G.rows[v] & placed
        if (row & placed_one).bit_count() < (row & ~placed_one).bit_count():
            side[v] = 1
            placed_one |= 1 << v
        placed |= 1 << v
    return side


def _to_cut(x: np.ndarray) -> Cut:
    side = (x < 0).astype(np.int64)
    if side.size and side[0]:
        side = 1 - side
    return Cut(tuple(int(s) for s in side))


def maxcut_local_search(
    G: Graph,
    seed: int = 0,
    restarts: int | None = None,
    max_passes: int | None = None,
) -> MaxCutResult:
    restarts = settings.LOCAL_SEARCH_RESTARTS if restarts is None else restarts
    max_passes = settings.LOCAL_SEARCH_MAX_PASSES if max_passes is None else max_passes
    adj = G.adjacency
    rng = np.random.default_rng(seed)

    starts = [1 - 2 * _greedy_balanced(G)]
    starts.extend(1 - 2 * rng.integers(0, 2, size=G.n) for _ in range(restarts))

    best_cut: Cut | None = None
    best_value = -1
    for start in starts:
        cut = _to_cut(_polish(adj, start.astype(np.float64), max_passes))
        value = cut_evaluate(G, cut).cut_size
        if value > best_value:
            best_cut, best_value = cut, value
    assert best_cut is not None
    return MaxCutResult(best_value, best_cut, "local_search", False, best_value - G.m / 2)


def surplus_upper_bound_lambda(G: Graph) -> float:
    """|lambda_n| * n / 4."""
    if G.n < 1:
        raise ValueError("surplus_upper_bound_lambda needs n >= 1")
    lam_n = float(adjacency_spectrum(G).eigenvalues[-1])
    return abs(lam_n) * G.n / 4


# --- Certificates ---

@dataclass(frozen=True)
class WitnessMatrix:
    description: str
    X: np.ndarray


@dataclass(frozen=True)
class LowRankFactor:
    V: np.ndarray

    @property
    def X(self) -> np.ndarray:
        return self.V @ self.V.T


@dataclass(frozen=True)
class BiasedWitness:
    X: VertexSet
    Y: VertexSet
    p: float
    cut: Cut


@dataclass(frozen=True)
class SurplusCertificate:
    kind: CertificateKind
    bound: float
    target: Literal["surp", "surp_star"]
    witness: Any
    feasibility_checked: bool
    details: dict[str, Any] = field(default_factory=dict)


def _relaxation_feasible(G: Graph, X: np.ndarray, bound: float, tol: float) -> bool:
    if G.n == 0:
        return bound == 0
    diag_ok = float(np.max(np.diag(X))) <= 1 + settings.PSD_TOL
    value = -float(np.sum(G.adjacency * X))
    value_ok = abs(value - bound) <= tol * max(1.0, abs(bound))
    return diag_ok and value_ok and psd_check(X).psd


def verify_certificate(G: Graph, cert: SurplusCertificate, tol: float = 1e-6) -> bool:
    """Recompute feasibility of an emitted certificate from its witness alone."""
    w = cert.witness
    if cert.target == "surp":
        cut = w.cut if isinstance(w, BiasedWitness) else w
        return cut_evaluate(G, cut).surplus >= cert.bound - tol
    if isinstance(w, tuple):
        parts_ok = all(verify_certificate(G, part, tol) for part in w)
        product = math.prod(part.bound for part in w)
        return parts_ok and cert.bound ** 2 <= product + tol * max(1.0, product)
    return _relaxation_feasible(G, w.X, cert.bound, tol)


def certificates_neg_eigen(G: Graph) -> list[SurplusCertificate]:
    """Feasible relaxation points built from the negative eigenpairs of A."""
    if G.n < 2:
        raise ValueError("certificates_neg_eigen needs n >= 2")
    dec = adjacency_spectrum(G)
    neg = dec.negative_indices()
    lam = dec.eigenvalues[neg]
    Vn = dec.eigenvectors[:, neg]
    tol = 1e-6

    X1 = Vn @ Vn.T
    b1 = float(np.sum(np.abs(lam)))
    cert1 = SurplusCertificate(
        "NegEigenSum", b1, "surp_star",
        WitnessMatrix("sum of v_i v_i^T over negative eigenvalues", X1),
        _relaxation_feasible(G, X1, b1, tol),
        {"negative_eigenvalues": int(neg.size)},
    )

    max_codegree = densities_and_degrees(complement(G)).max_degree
    beta = 1 / (100 * (max_codegree + 1))
    X3 = beta * (Vn * lam ** 2) @ Vn.T
    b3 = beta * float(np.sum(np.abs(lam) ** 3))
    max_diag = float(np.max(np.diag(X3)))
    rescaled = max_diag > 1
    if rescaled:
        logger.warning(f"Cubic test matrix diagonal {max_diag:.4g} > 1, rescaling to stay feasible")
        X3 = X3 / max_diag
        b3 = b3 / max_diag
    cert3 = SurplusCertificate(
        "NegEigenCubes", b3, "surp_star",
        WitnessMatrix("beta * sum of lambda_i^2 v_i v_i^T over negative eigenvalues", X3),
        _relaxation_feasible(G, X3, b3, tol),
        {"beta": beta, "complement_max_degree": max_codegree, "rescaled_by": max_diag if rescaled else 1.0},
    )

    # geometric mean of two feasible values never exceeds the larger one
    b2 = math.sqrt(b1 * b3)
    cert2 = SurplusCertificate(
        "NegEigenSquares", b2, "surp_star", (cert1, cert3),
        cert1.feasibility_checked and cert3.feasibility_checked,
        {"sum_of_squares": float(np.sum(lam ** 2))},
    )
    return [cert1, cert2, cert3]


@dataclass(frozen=True)
class LowRankResult:
    certificate: SurplusCertificate
    cut: Cut
    cut_surplus: float
    ratio: float
    steps: int


def surp_star_lowrank(
    G: Graph,
    rank: int | None = None,
    seed: int = 0,
    iters: int | None = None,
    steps: int | None = None,
) -> LowRankResult:
    """Projected gradient ascent of -<A, VV^T> over row-bounded V, then hyperplane rounding."""
    rank = settings.LOWRANK_RANK if rank is None else rank
    iters = settings.ROUNDING_TRIALS if iters is None else iters
    steps = settings.LOWRANK_STEPS if steps is None else steps
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    n = G.n
    adj = G.adjacency
    rng = np.random.default_rng(seed)

    # warm start from the negative eigenvectors, so the ascent begins at the first certificate
    V = np.zeros((n, rank))
    if n >= 2:
        dec = adjacency_spectrum(G)
        neg = dec.negative_indices()[::-1][:rank]
        V[:, : neg.size] = dec.eigenvectors[:, neg]
    V += 1e-3 * rng.standard_normal((n, rank))

    def project(M: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(M, axis=1, keepdims=True)
        return M / np.maximum(norms, 1.0)

    def objective(M: np.ndarray) -> float:
        return -float(np.sum((adj @ M) * M))

    V = project(V)
    eta = 1 / (2 * max(G.degrees, default=0) + 2)
    best_V, best_value = V, objective(V)
    for _ in range(steps):
        V = project(V - 2 * eta * (adj @ V))
        value = objective(V)
        if value > best_value:
            best_V, best_value = V, value

    factor = LowRankFactor(best_V)
    cert = SurplusCertificate(
        "LowRankFactor", best_value, "surp_star", factor,
        _relaxation_feasible(G, factor.X, best_value, 1e-6),
        {"rank": rank, "steps": steps},
    )

    best_cut = Cut((0,) * n)
    best_surplus = cut_evaluate(G, best_cut).surplus
    for g in rng.standard_normal((iters, rank)):
        x = np.where(best_V @ g < 0, -1.0, 1.0)
        cut = _to_cut(_polish(adj, x, settings.LOCAL_SEARCH_MAX_PASSES))
        surplus = cut_evaluate(G, cut).surplus
        if surplus > best_surplus:
            best_cut, best_surplus = cut, surplus
    ratio = best_surplus / best_value if best_value > 0 else math.nan
    logger.debug(f"Low-rank bound {best_value:.6g}, rounded surplus {best_surplus}, ratio {ratio:.3g}")
    return LowRankResult(cert, best_cut, best_surplus, ratio, steps)


def biased_partition_cut(
    G: Graph,
    X: VertexSet,
    Y: VertexSet,
    seed: int = 0,
    samples: int | None = None,
) -> SurplusCertificate:
    """Cut from an unbalanced partition: Y on side 0, X vertices on side 1 with probability 1/2 + p."""
    samples = settings.BIASED_SAMPLES if samples is None else samples
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    X.check(G.n)
    Y.check(G.n)
    if X.mask & Y.mask or (X.mask | Y.mask) != G.full_mask:
        raise ValueError("X and Y must partition the vertex set")
    n = G.n
    a = G.edges_within(X.mask)
    b = bipartite_edges(G, X, Y)
    c = G.edges_within(Y.mask)
    details: dict[str, Any] = {
        "a": a, "b": b, "c": c,
        "lemma_bound": b * b / (4 * n * n) - c if n else 0.0,
    }

    if a <= b / 2:
        cut = Cut.from_mask(X.mask, n)
        surplus = cut_evaluate(G, cut).surplus
        details.update(branch="deterministic", p=0.5)
        return SurplusCertificate("ExplicitCut", surplus, "surp", cut, True, details)

    p = b / (4 * a)
    details.update(branch="biased", p=p, expected_surplus=b * b / (8 * a) - c / 2)
    rng = np.random.default_rng(seed)
    in_x = np.zeros(n, dtype=bool)
    in_x[list(X)] = True
    draws = (rng.random((samples, n)) < 0.5 + p) & in_x
    sides = draws.astype(np.float64)
    values = sides @ np.asarray(G.degrees, dtype=np.float64) - np.einsum(
        "ij,ij->i", sides @ G.adjacency, sides
    )
    best = int(np.argmax(values))
    cut = Cut(tuple(int(s) for s in draws[best]))
    surplus = cut_evaluate(G, cut).surplus
    return SurplusCertificate("BiasedCut", surplus, "surp", BiasedWitness(X, Y, p, cut), True, details)


@dataclass(frozen=True)
class TwoCliqueCut:
    graph: Graph
    cut: Cut
    surplus: float
    bound: float


def two_clique_cut(a: int, b: int, c: int) -> TwoCliqueCut:
    if min(a, b, c) < 0 or a + b + c < 1:
        raise ValueError(f"need a, b, c >= 0 with a + b + c >= 1, got ({a}, {b}, {c})")
    G = two_clique_graph(a, b, c)
    n = G.n
    t = min(a, b)
    A_core = list(range(0, t))
    B_core = list(range(a, a + t))
    C_all = list(range(a + b, n))
    half = (t + c) // 2
    if c <= t:
        upper = A_core[:half] + B_core[:half]
    else:
        upper = C_all[:half]

    side = [-1] * n
    for v in A_core + B_core + C_all:
        side[v] = 0
    for v in upper:
        side[v] = 1
    # truncated private vertices: greedy placement never lowers the surplus
    for v in range(n):
        if side[v] >= 0:
            continue
        ones = sum(1 for u in G.neighbors(v) if side[u] == 1)
        zeros = sum(1 for u in G.neighbors(v) if side[u] == 0)
        side[v] = 1 if ones < zeros else 0
    cut = Cut(tuple(side))
    return TwoCliqueCut(G, cut, cut_evaluate(G, cut).surplus, min(a * a, b * b, c * c) / 4)


# --- Very dense graphs with a balanced complement ---

@dataclass(frozen=True)
class VeryDenseAnalysis:
    n: int
    p: float
    C: float
    complement_max_degree: int
    balanced: bool
    applicable: bool
    case: Literal["squares", "cubes", "first_moment", "empty_complement"]
    P1: float
    P2: float
    P3: float
    N1: float
    N2: float
    N3: float
    T: float
    certified_bound: float
    weyl_transfer_ok: bool
    analytic_target: float


def very_dense_case_analysis(G: Graph, C: float | None = None, tol: float = 1e-6) -> VeryDenseAnalysis:
    """Spectral case split for dense graphs whose complement is C-balanced.

    With mu the complement spectrum, the negative part of A dominates the
    positive part of mu after the first eigenvalue, so P1(mu) is a certified
    lower bound on the relaxation. The case selected mirrors which of the
    first, second or third moment carries the argument.
    """
    n = G.n
    if n < 2:
        raise ValueError("very_dense_case_analysis needs n >= 2")
    H = complement(G)
    stats = densities_and_degrees(H)
    p = stats.edge_density
    ratio = stats.max_degree / stats.avg_degree if stats.avg_degree > 0 else 1.0
    C = ratio if C is None else C
    balanced = stats.max_degree <= C * stats.avg_degree + 1e-12
    applicable = balanced and p < 0.001 / (C * C)

    mu_dec = adjacency_spectrum(H)
    mu = mu_dec.eigenvalues
    ctol = mu_dec.classification_tol()
    pos = mu[1:][mu[1:] > ctol]
    neg = np.abs(mu[mu < -ctol])
    P = [float(np.sum(pos ** k)) for k in (1, 2, 3)]
    N = [float(np.sum(neg ** k)) for k in (1, 2, 3)]
    T = N[2] - P[2]

    lam = adjacency_spectrum(G).eigenvalues
    certified = float(np.sum(np.abs(lam[lam < -adjacency_spectrum(G).classification_tol()])))
    weyl_ok = certified >= P[0] - tol * max(1.0, P[0])

    if p == 0:
        case, target = "empty_complement", 0.0
    else:
        if N[1] <= p * n * n / 8:
            case = "squares"
        elif N[2] >= 2 * T:
            case = "cubes"
        else:
            case = "first_moment"
        target = min(n / (C ** 3 * p), math.sqrt(p) * n ** 1.5 / C)
    if not weyl_ok:
        logger.warning(f"Weyl transfer failed: negative mass {certified:.6g} < P1 {P[0]:.6g}")
    return VeryDenseAnalysis(
        n, p, C, stats.max_degree, balanced, applicable, case,
        *P, *N, T, certified, weyl_ok, target,
    )
