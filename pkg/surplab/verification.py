"""Seeded property suites behind `verify`.

Every suite draws its instances from a Philox stream keyed by the run seed,
so the same (suite, count, seed) always checks the same graphs.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

import numpy as np

from .extraction import (
    density_increment_iterate,
    density_increment_step,
    extract_balanced,
    iteration_cap,
    membership_holds,
)
from .generators import GraphSpec, generate, philox, sample_indices
from .graph import Graph, VertexSet, edit_distance_to_partition_cliques, induced_subgraph
from .params import PipelineParams
from .spectral import (
    SpectralInvariantError,
    adjacency_spectrum,
    power_sums,
    principal_vector_check,
    weyl_check,
)
from .stability import rank1_boolean_round, stability_certificate, top_singular_pair
from .surplus import (
    biased_partition_cut,
    certificates_neg_eigen,
    maxcut_exact,
    surplus_upper_bound_lambda,
    two_clique_cut,
    very_dense_case_analysis,
    verify_certificate,
)

logger = logging.getLogger(__name__)

MAX_FAILURES = 5
SEED_SPAN = 2 ** 63
PARTITION_KEY = 2 ** 63  # instance seeds stay below this bit


@dataclass
class SuiteResult:
    name: str
    passed: int
    total: int
    tolerance: float
    seed: int
    failures: list[dict[str, Any]] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.passed == self.total


class _Tally:
    def __init__(self, name: str, tolerance: float, seed: int) -> None:
        self.result = SuiteResult(name, 0, 0, tolerance, seed)

    def record(self, ok: bool, **context: Any) -> None:
        self.result.total += 1
        if ok:
            self.result.passed += 1
        elif len(self.result.failures) < MAX_FAILURES:
            self.result.failures.append(context)

    def bump(self, key: str) -> None:
        self.result.details[key] = self.result.details.get(key, 0) + 1


def _instances(
    seed: int, count: int, sizes: tuple[int, int], density: tuple[float, float] = (0.0, 1.0)
) -> Iterator[tuple[GraphSpec, Graph]]:
    rng = philox(seed)
    for _ in range(count):
        n = int(rng.integers(sizes[0], sizes[1] + 1))
        p = float(rng.uniform(*density))
        spec = GraphSpec("gnp", {"n": n, "p": p}, int(rng.integers(0, SEED_SPAN)))
        yield spec, generate(spec)


def random_partition(spec: GraphSpec, n: int) -> tuple[VertexSet, VertexSet]:
    """Fair coin per vertex, keyed apart from the instance's edge draws."""
    in_x = philox(spec.seed | PARTITION_KEY).random(n) < 0.5
    X = VertexSet(tuple(int(v) for v in np.flatnonzero(in_x)))
    Y = VertexSet(tuple(int(v) for v in np.flatnonzero(~in_x)))
    return X, Y


def _edwards_bound(m: int) -> float:
    return m / 2 + (math.sqrt(8 * m + 1) - 1) / 8


# --- Oracle suites ---

def edwards(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("edwards", 1e-9, seed)
    for spec, G in _instances(seed, count, (1, 12)):
        value = maxcut_exact(G, params.exact_limit, workers).value
        bound = _edwards_bound(G.m)
        tally.record(value >= bound - 1e-9, graph=spec.to_dict(), value=value, bound=bound)
    # odd cliques meet the bound exactly
    for k in (3, 5, 7):
        G = generate(GraphSpec("complete", {"n": k}))
        value = maxcut_exact(G, params.exact_limit, workers).value
        bound = _edwards_bound(G.m)
        tally.record(abs(value - bound) <= 1e-9, graph=f"K{k}", value=value, bound=bound)
    return tally.result


def egk(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("egk", 1e-9, seed)
    for spec, G in _instances(seed, count, (2, 12), (0.1, 1.0)):
        H = induced_subgraph(G, VertexSet(tuple(v for v in range(G.n) if G.degrees[v])))
        surplus = maxcut_exact(H, params.exact_limit, workers).surplus
        tally.record(surplus >= H.n / 6 - 1e-9, graph=spec.to_dict(), n=H.n, surplus=surplus)
    return tally.result


def claim22(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("claim22", 1e-6, seed)
    for spec, G in _instances(seed, count, (1, 12)):
        surplus = maxcut_exact(G, params.exact_limit, workers).surplus
        bound = surplus_upper_bound_lambda(G)
        tally.record(surplus <= bound + 1e-6, graph=spec.to_dict(), surplus=surplus, bound=bound)
    K2 = generate(GraphSpec("complete", {"n": 2}))
    surplus = maxcut_exact(K2, params.exact_limit, workers).surplus
    bound = surplus_upper_bound_lambda(K2)
    tally.record(abs(surplus - bound) <= 1e-6, graph="K2", surplus=surplus, bound=bound)
    return tally.result


# --- Spectral suites ---

def lemma24(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("lemma24", 1e-6, seed)
    for spec, G in _instances(seed, count, (2, 40)):
        certs = certificates_neg_eigen(G)
        bad = [c.kind for c in certs if not (c.feasibility_checked and verify_certificate(G, c))]
        tally.record(not bad, graph=spec.to_dict(), rejected=bad)
    for k in (5, 12, 20):
        bound = certificates_neg_eigen(generate(GraphSpec("complete", {"n": k})))[0].bound
        tally.record(abs(bound - (k - 1)) <= 1e-6, graph=f"K{k}", bound=bound)
    return tally.result


def lemma25(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("lemma25", 1e-9, seed)
    for spec, G in _instances(seed, count, (10, 40), (0.9, 1.0)):
        report = principal_vector_check(G)
        if report.applicable:
            tally.bump("applicable")
        tally.record(not report.violations, graph=spec.to_dict(), violations=list(report.violations))
    return tally.result


def weyl(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("weyl", 1e-6, seed)
    for spec, G in _instances(seed, count, (2, 30)):
        report = weyl_check(G)
        tally.record(report.ok, graph=spec.to_dict(), max_slack=report.max_slack)
    return tally.result


def powersums(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("powersums", 1e-5, seed)
    for spec, G in _instances(seed, count, (1, 30)):
        try:
            power_sums(adjacency_spectrum(G), G)
        except SpectralInvariantError as exc:
            tally.record(False, graph=spec.to_dict(), error=str(exc))
        else:
            tally.record(True)
    return tally.result


# --- Extraction suites ---

def lemma31(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("lemma31", 1e-12, seed)
    for spec, G in _instances(seed, count, (12, 60), (0.9, 1.0)):
        trace = density_increment_iterate(G, params)
        tally.bump(trace.halted_by)
        ok = trace.verify(G) and len(trace.steps) - 1 <= iteration_cap(G.n)
        tally.record(ok, graph=spec.to_dict(), halted_by=trace.halted_by, steps=len(trace.steps))
    return tally.result


def _check_increment(G: Graph, params: PipelineParams) -> tuple[bool, dict[str, Any]]:
    step = density_increment_step(G, params)
    if not step.applicable:
        return True, {"applicable": False}
    dec = adjacency_spectrum(G)
    neg = dec.negative_indices()
    E = (dec.eigenvectors[:, neg] * np.abs(dec.eigenvalues[neg])) @ dec.eigenvectors[:, neg].T
    kept = membership_holds(np.diag(E), dec.eigenvectors[:, 0], step.theta_E, step.v1_floor)
    membership_ok = tuple(int(i) for i in np.flatnonzero(kept)) == step.I.members
    ok = step.size_guarantee_met and membership_ok and step.diagnostics["D_psd"]
    return ok, {
        "applicable": True,
        "kept": len(step.I),
        "membership_ok": membership_ok,
        "D_psd": step.diagnostics["D_psd"],
    }


def lemma32(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("lemma32", 1e-8, seed)
    cases: list[tuple[Any, Graph]] = [(spec.to_dict(), G) for spec, G in _instances(seed, count, (12, 60), (0.9, 1.0))]
    for n in range(12, 61, 8):
        spec = GraphSpec("clique_minus_matching", {"n": n})
        cases.append((spec.to_dict(), generate(spec)))
    for label, G in cases:
        ok, context = _check_increment(G, params)
        if context["applicable"]:
            tally.bump("applicable")
        tally.record(ok, graph=label, **context)
    return tally.result


def lemma43(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("lemma43", 1e-6, seed)
    for spec, G in _instances(seed, count, (10, 30), (0.9, 1.0)):
        analysis = very_dense_case_analysis(G, params.C)
        tally.bump(analysis.case)
        tally.record(
            analysis.weyl_transfer_ok, graph=spec.to_dict(),
            certified=analysis.certified_bound, P1=analysis.P1,
        )
    return tally.result


def lemma44(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("lemma44", 1e-9, seed)
    for spec, G in _instances(seed, count, (4, 60)):
        result = extract_balanced(G)
        ok = result.balanced and result.size_bound_met and result.density_ok
        tally.record(
            ok, graph=spec.to_dict(), balanced=result.balanced,
            kept=len(result.S), size_bound=result.size_bound, density_ok=result.density_ok,
        )
    return tally.result


# --- Cut and stability suites ---

def lemma51(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("lemma51", 1e-9, seed)
    for spec, G in _instances(seed, count, (2, 12)):
        X, Y = random_partition(spec, G.n)
        cert = biased_partition_cut(G, X, Y, seed=spec.seed)
        surplus = maxcut_exact(G, params.exact_limit, workers).surplus
        bound = cert.details["lemma_bound"]
        ok = surplus >= bound - 1e-9 and cert.bound <= surplus + 1e-9 and verify_certificate(G, cert)
        tally.record(ok, graph=spec.to_dict(), X=list(X), surplus=surplus, bound=bound, kind=cert.kind)
    return tally.result


def lemma53(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("lemma53", 1e-9, seed)
    rng = philox(seed)
    for i in range(count):
        n = int(rng.integers(8, 31))
        x = (rng.random(n) < 0.5).astype(np.float64)
        y = (rng.random(n) < 0.5).astype(np.float64)
        A = np.outer(x, y)
        k = 0 if i % 4 == 0 else int(rng.integers(1, n * n // 10 + 1))
        flat = A.reshape(-1)
        idx = sample_indices(rng, n * n, k)
        flat[idx] = 1.0 - flat[idx]
        u, v, _ = top_singular_pair(A)
        rounding = rank1_boolean_round(A, u, v)
        bound = 20 * rounding.delta ** (1 / 3) * n * n
        ok = rounding.error <= bound + 1e-9 and (k > 0 or rounding.error == 0)
        tally.record(ok, n=n, flips=k, error=rounding.error, bound=bound)
    return tally.result


def lemma54(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    """Exhaustive over 1 <= a, b, c <= 4; count and seed do not apply."""
    tally = _Tally("lemma54", 1e-9, seed)
    for a, b, c in itertools.product(range(1, 5), repeat=3):
        built = two_clique_cut(a, b, c)
        oracle = maxcut_exact(built.graph, params.exact_limit, workers).surplus
        ok = built.surplus >= built.bound - 1e-9 and oracle >= built.bound - 1e-9
        tally.record(ok, abc=[a, b, c], surplus=built.surplus, oracle=oracle, bound=built.bound)
    return tally.result


def stability(count: int, seed: int, params: PipelineParams, workers: int) -> SuiteResult:
    tally = _Tally("stability", 0.0, seed)
    rng = philox(seed)
    sizes = [15, 15, 15, 15]
    for _ in range(count):
        spec = GraphSpec("perturbed_clique_union", {"sizes": sizes, "flips": 10}, int(rng.integers(0, SEED_SPAN)))
        G = generate(spec)
        report = stability_certificate(G, params)
        ok = (
            report.certified
            and report.edit_distance <= 30
            and edit_distance_to_partition_cliques(G, report.parts) == report.edit_distance
        )
        tally.record(ok, graph=spec.to_dict(), status=report.status, edit_distance=report.edit_distance)

    exact = generate(GraphSpec("disjoint_cliques", {"sizes": sizes}))
    report = stability_certificate(exact, params)
    tally.record(report.certified and report.edit_distance == 0, graph="disjoint 4xK15", status=report.status)

    spec = GraphSpec("gnp", {"n": 60, "p": 0.5}, int(rng.integers(0, SEED_SPAN)))
    report = stability_certificate(generate(spec), params)
    tally.record(
        not report.certified and bool(report.failure),
        graph=spec.to_dict(), status=report.status,
    )
    return tally.result


Suite = Callable[[int, int, PipelineParams, int], SuiteResult]

SUITES: dict[str, Suite] = {
    "edwards": edwards,
    "egk": egk,
    "claim22": claim22,
    "lemma24": lemma24,
    "lemma25": lemma25,
    "weyl": weyl,
    "powersums": powersums,
    "lemma31": lemma31,
    "lemma32": lemma32,
    "lemma43": lemma43,
    "lemma44": lemma44,
    "lemma51": lemma51,
    "lemma53": lemma53,
    "lemma54": lemma54,
    "stability": stability,
}

DEFAULT_COUNTS = {
    "edwards": 300, "egk": 200, "claim22": 300, "lemma24": 200, "lemma25": 100,
    "weyl": 200, "powersums": 200, "lemma31": 100, "lemma32": 100, "lemma43": 100,
    "lemma44": 200, "lemma51": 100, "lemma53": 100, "lemma54": 64, "stability": 5,
}


def run_suites(
    name: str,
    count: int | None = None,
    seed: int = 0,
    params: PipelineParams | None = None,
    workers: int = 1,
) -> list[SuiteResult]:
    """Run one suite by name, or every suite for `all`."""
    if name != "all" and name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}")
    if count is not None and count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    params = params or PipelineParams()
    philox(seed)
    names = list(SUITES) if name == "all" else [name]
    results = []
    for suite in names:
        n_cases = DEFAULT_COUNTS[suite] if count is None else count
        result = SUITES[suite](n_cases, seed, params, workers)
        level = logging.INFO if result.ok else logging.WARNING
        logger.log(level, f"Suite {suite}: {result.passed}/{result.total} passed")
        results.append(result)
    return results
