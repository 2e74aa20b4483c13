"""Symmetric eigendecomposition and the spectral quantities the surplus lemmas consume."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from cachetools import cached

from .cache import spectrum_cache
from .config import settings
from .graph import Graph, complement, densities_and_degrees, triangle_count

logger = logging.getLogger(__name__)

# Type alias: a real symmetric square ndarray.
SymMatrix = np.ndarray


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, best_residual: float) -> None:
        self.best_residual = best_residual
        super().__init__(f"{message} (best residual {best_residual:.3e})")


class SpectralInvariantError(ArithmeticError):
    """A power-sum identity failed; the decomposition cannot be trusted."""


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray   # descending
    eigenvectors: np.ndarray  # columns, orthonormal
    residual_tol: float
    max_residual: float
    sweeps: int = 0
    solver: str = "jacobi"

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.T

    def classification_tol(self) -> float:
        top = abs(self.eigenvalues[0]) if self.n else 0.0
        return settings.CLASSIFICATION_TOL * max(top, 1.0)

    def negative_indices(self) -> np.ndarray:
        return np.flatnonzero(self.eigenvalues < -self.classification_tol())


def as_symmetric(M: np.ndarray) -> SymMatrix:
    a = np.asarray(M, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    return a


def default_tol(M: np.ndarray) -> float:
    n = M.shape[0]
    scale = float(np.max(np.abs(M))) if M.size else 0.0
    return max(1e-10 * n * scale, 1e-12)


def _jacobi(a: np.ndarray, max_sweeps: int, off_tol: float) -> tuple[np.ndarray, np.ndarray, int]:
    """Cyclic-by-row Jacobi rotations; returns (diagonal, rotations, sweeps used)."""
    n = a.shape[0]
    v = np.eye(n)
    best_off = math.inf
    for sweep in range(max_sweeps + 1):
        off = math.sqrt(float(np.sum(np.triu(a, 1) ** 2)))
        best_off = min(best_off, off)
        if off <= off_tol:
            return np.diag(a).copy(), v, sweep
        if sweep == max_sweeps:
            break
        skip = off_tol / max(n, 1)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                a[:, p] = c * col_p - s * a[:, q]
                a[:, q] = s * col_p + c * a[:, q]
                row_p = a[p, :].copy()
                a[p, :] = c * row_p - s * a[q, :]
                a[q, :] = s * row_p + c * a[q, :]
                a[p, q] = a[q, p] = 0.0
                vec_p = v[:, p].copy()
                v[:, p] = c * vec_p - s * v[:, q]
                v[:, q] = s * vec_p + c * v[:, q]
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", best_off)


def eigendecompose(
    M: np.ndarray,
    tol: float | None = None,
    *,
    solver: str | None = None,
    max_sweeps: int | None = None,
) -> SpectralDecomposition:
    """Descending eigenpairs with the residual and orthonormality checked at `tol`."""
    a = as_symmetric(M)
    n = a.shape[0]
    tol = default_tol(a) if tol is None else tol
    if tol <= 0:
        raise ValueError("tol must be positive")
    solver = solver or settings.EIGEN_SOLVER
    max_sweeps = settings.EIGEN_MAX_SWEEPS if max_sweeps is None else max_sweeps

    sweeps = 0
    if n == 0:
        w, vecs = np.zeros(0), np.zeros((0, 0))
    elif solver == "jacobi":
        w, vecs, sweeps = _jacobi(a.copy(), max_sweeps, tol / 10.0)
    elif solver == "lapack":
        w, vecs = np.linalg.eigh(a)
    else:
        raise ValueError(f"unknown eigen solver {solver!r}")

    order = np.argsort(-w, kind="stable")
    w = w[order]
    vecs = vecs[:, order]
    # Знак: первая значимая компонента каждого вектора положительна
    for j in range(n):
        significant = np.flatnonzero(np.abs(vecs[:, j]) > tol)
        if significant.size and vecs[significant[0], j] < 0:
            vecs[:, j] = -vecs[:, j]

    residual = float(np.max(np.linalg.norm(a @ vecs - vecs * w, axis=0))) if n else 0.0
    ortho = float(np.max(np.abs(vecs.T @ vecs - np.eye(n)))) if n else 0.0
    if residual > tol or ortho > tol:
        raise ConvergenceError(
            f"eigenpairs fail tolerance {tol:.3e} (orthonormality error {ortho:.3e})",
            residual,
        )
    w.setflags(write=False)
    vecs.setflags(write=False)
    logger.debug(f"Decomposed order-{n} matrix with {solver} in {sweeps} sweeps, residual {residual:.2e}")
    return SpectralDecomposition(w, vecs, tol, residual, sweeps, solver)


@cached(spectrum_cache, key=lambda G: (G.digest, settings.EIGEN_SOLVER, 0.0))
def adjacency_spectrum(G: Graph) -> SpectralDecomposition:
    return eigendecompose(G.adjacency)


@dataclass(frozen=True)
class PowerSums:
    lambda1: float
    P1: float
    P2: float
    P3: float
    N1: float
    N2: float
    N3: float
    T: float
    trace_residual: float
    frobenius_residual: float
    triangle_residual: float
    tolerance: float


def power_sums(dec: SpectralDecomposition, G: Graph, rel_tol: float = 1e-5) -> PowerSums:
    """P_k over positive eigenvalues after the first, N_k over negative ones."""
    values = dec.eigenvalues
    ctol = dec.classification_tol()
    lam1 = float(values[0]) if dec.n else 0.0
    rest = values[1:]
    pos = rest[rest > ctol]
    neg = np.abs(values[values < -ctol])
    P = [float(np.sum(pos ** k)) for k in (1, 2, 3)]
    N = [float(np.sum(neg ** k)) for k in (1, 2, 3)]
    T = N[2] - P[2]

    # zero-classified eigenvalues contribute to neither side
    slack = dec.n * ctol
    trace_res = abs(lam1 + P[0] - N[0])
    frob_res = abs(lam1 ** 2 + P[1] + N[1] - 2 * G.m)
    tri_res = abs(lam1 ** 3 - T - 6 * triangle_count(G))
    checks = (
        ("trace", trace_res, rel_tol * max(1.0, lam1 + N[0]) + slack),
        ("frobenius", frob_res, rel_tol * max(1.0, 2 * G.m) + slack * ctol),
        ("triangle", tri_res, rel_tol * max(1.0, abs(lam1) ** 3 + P[2] + N[2]) + slack * ctol ** 2),
    )
    for name, residual, bound in checks:
        if residual > bound:
            raise SpectralInvariantError(f"{name} identity off by {residual:.3e} (allowed {bound:.3e})")
    return PowerSums(lam1, *P, *N, T, trace_res, frob_res, tri_res, rel_tol)


def hadamard(Ms: Sequence[np.ndarray]) -> SymMatrix:
    if not Ms:
        raise ValueError("hadamard needs at least one matrix")
    shape = np.shape(Ms[0])
    out = np.ones(shape)
    for M in Ms:
        if np.shape(M) != shape:
            raise ValueError(f"order mismatch: {np.shape(M)} vs {shape}")
        out = out * np.asarray(M, dtype=np.float64)
    return out


@dataclass(frozen=True)
class PsdVerdict:
    psd: bool
    min_eigenvalue: float
    threshold: float


def psd_check(M: np.ndarray, tol: float | None = None) -> PsdVerdict:
    a = np.asarray(M, dtype=np.float64)
    # symmetrize away round-off from products like V @ V.T
    a = (a + a.T) / 2.0
    tol = settings.PSD_TOL if tol is None else tol
    n = a.shape[0]
    if n == 0:
        return PsdVerdict(True, 0.0, 0.0)
    scale = max(1.0, n * float(np.max(np.abs(a))))
    min_eig = float(eigendecompose(a).eigenvalues[-1])
    threshold = -tol * scale
    return PsdVerdict(min_eig >= threshold, min_eig, threshold)


@dataclass(frozen=True)
class PrincipalVectorReport:
    applicable: bool
    complement_density: float
    complement_max_degree: int
    lower: float
    upper: float
    violations: tuple[int, ...] = ()


def principal_vector_check(
    G: Graph, dec: SpectralDecomposition | None = None, tol: float = 1e-9
) -> PrincipalVectorReport:
    """Entrywise bounds on the principal eigenvector of a dense graph."""
    n = G.n
    stats = densities_and_degrees(complement(G))
    p, delta = stats.edge_density, stats.max_degree
    if n < 2 or p > 0.1:
        return PrincipalVectorReport(False, p, delta, math.nan, math.nan)
    dec = dec or adjacency_spectrum(G)
    v1 = dec.eigenvectors[:, 0]
    lower = (1 - 2 * delta / n) / math.sqrt(n)
    upper = (1 + 2 * p + 2 / n) / math.sqrt(n)
    bad = tuple(int(i) for i in np.flatnonzero((v1 < lower - tol) | (v1 > upper + tol)))
    if bad:
        logger.warning(f"Principal vector bounds violated at {len(bad)} vertices")
    return PrincipalVectorReport(True, p, delta, lower, upper, bad)


@dataclass(frozen=True)
class WeylReport:
    max_slack: float
    ok: bool
    tol: float
    slacks: tuple[float, ...] = field(default=(), repr=False)


def weyl_check(G: Graph, tol: float = 1e-6) -> WeylReport:
    """1 + mu_{i+1} <= -lambda_{n+1-i} for i = 1..n-1 (mu: complement spectrum)."""
    if G.n < 2:
        raise ValueError("weyl_check needs n >= 2")
    lam = adjacency_spectrum(G).eigenvalues
    mu = adjacency_spectrum(complement(G)).eigenvalues
    n = G.n
    slacks = tuple(float(1 + mu[i] + lam[n - i]) for i in range(1, n))
    worst = max(slacks)
    return WeylReport(worst, worst <= tol, tol, slacks)


def spectrum_symmetry_gap(dec: SpectralDecomposition) -> float:
    """max_i |lambda_i + lambda_{n+1-i}|; zero for bipartite adjacency."""
    w = dec.eigenvalues
    return float(np.max(np.abs(w + w[::-1]))) if dec.n else 0.0
