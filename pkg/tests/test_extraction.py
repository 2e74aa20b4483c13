from __future__ import annotations

import dataclasses
import itertools

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from conftest import complete_graph
from surplab.extraction import (
    TraceStep,
    degeneracy_order,
    density_increment_iterate,
    density_increment_step,
    extract_balanced,
    find_max_clique,
    improve_clique,
    iteration_cap,
    lift,
    master_chain,
    membership_holds,
    peel_dense,
    pull_cliques,
)
from surplab.generators import GraphSpec, generate
from surplab.graph import VertexSet, build_graph, is_clique
from surplab.params import PipelineParams


def star(n: int):
    return build_graph([(0, v) for v in range(1, n)], n)


def test_lift_maps_back_to_parent_labels():
    parent = VertexSet.of([2, 5, 7, 9])
    assert lift(parent, VertexSet.of([0, 3])) == VertexSet.of([2, 9])


def test_membership_rule():
    E_diag = np.array([0.1, 0.5, 0.1])
    v1 = np.array([0.5, 0.5, 0.1])
    assert membership_holds(E_diag, v1, 0.2, 0.3).tolist() == [True, False, False]


def test_increment_step_on_clique_minus_matching():
    G = generate(GraphSpec("clique_minus_matching", {"n": 20}))
    step = density_increment_step(G, PipelineParams())
    assert step.applicable
    assert step.size_guarantee_met
    assert step.diagnostics["D_psd"]
    assert step.relaxed
    assert step.complement_density == pytest.approx(1 / 19)


def test_increment_step_strict_mode_refuses_relaxed_input():
    G = generate(GraphSpec("clique_minus_matching", {"n": 20}))
    with pytest.raises(ValueError):
        density_increment_step(G, PipelineParams(strict=True))


def test_increment_step_needs_four_vertices(k3):
    with pytest.raises(ValueError):
        density_increment_step(k3, PipelineParams())


@pytest.mark.parametrize("n, cap", [(2, 3), (4, 6), (16, 9), (2**16, 15)])
def test_iteration_cap(n, cap):
    assert iteration_cap(n) == cap


@hsettings(max_examples=15, deadline=None)
@given(st.integers(min_value=8, max_value=40), st.floats(min_value=0.85, max_value=1.0), st.integers(0, 2**32))
def test_iterate_trace_is_consistent(n, p, seed):
    G = generate(GraphSpec("gnp", {"n": n, "p": p}, seed))
    trace = density_increment_iterate(G, PipelineParams())
    assert trace.verify(G)
    assert len(trace.steps) - 1 <= iteration_cap(n)
    assert trace.steps[0].n_i == n


def test_trace_verify_detects_tampering():
    G = generate(GraphSpec("gnp", {"n": 20, "p": 0.95}, 4))
    trace = density_increment_iterate(G, PipelineParams())
    first = trace.steps[0]
    bad = dataclasses.replace(trace, steps=(TraceStep(first.vertex_set, first.n_i, first.density + 0.1, "start"),))
    assert not bad.verify(G)


def test_balanced_peeling_removes_star_hub():
    result = extract_balanced(star(20))
    assert 0 not in result.S
    assert len(result.S) == 19
    assert result.rounds == 1
    assert result.balanced and result.size_bound_met and result.density_ok


@hsettings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=40), st.floats(min_value=0.0, max_value=1.0), st.integers(0, 2**32))
def test_balanced_peeling_guarantees(n, p, seed):
    G = generate(GraphSpec("gnp", {"n": n, "p": p}, seed))
    result = extract_balanced(G)
    assert result.balanced
    assert result.density_ok
    assert result.H.n == len(result.S)


def test_degeneracy_order_is_permutation():
    order = degeneracy_order(star(6))
    assert sorted(order) == list(range(6))
    assert order[0] == 1


def test_find_max_clique(two_cliques):
    exact = find_max_clique(two_cliques)
    assert exact.exact and len(exact.clique) == 5
    heuristic = find_max_clique(two_cliques, limit_exact=4)
    assert not heuristic.exact
    assert is_clique(two_cliques, heuristic.clique)


def test_exact_clique_on_random_graph_is_maximal():
    G = generate(GraphSpec("gnp", {"n": 30, "p": 0.6}, 9))
    clique = find_max_clique(G).clique
    assert is_clique(G, clique)
    outside = [v for v in range(G.n) if v not in clique]
    assert all(not is_clique(G, VertexSet.of([*clique, v])) for v in outside)


def test_pull_cliques_on_disjoint_union():
    G = generate(GraphSpec("disjoint_cliques", {"sizes": [12, 12]}))
    pull = pull_cliques(G, PipelineParams())
    assert pull.target == 10
    assert sorted(len(c) for c in pull.cliques) == [12, 12]
    assert len(pull.residual) == 0
    assert len(pull.low_degree_removed) == 0


def test_peel_dense_finds_clique_core():
    edges = [(u, v) for u in range(6) for v in range(u + 1, 6)] + [(0, 6)]
    G = build_graph(edges, 7)
    assert peel_dense(G, 1.0, 4) == VertexSet.of(range(6))
    assert peel_dense(G, 1.0, 8) is None


def test_master_chain_on_clique():
    report = master_chain(complete_graph(20), PipelineParams())
    assert [s.name for s in report.stages] == ["dense_subgraph", "density_increment", "balanced_complement", "clique"]
    assert report.unmet == []
    assert len(report.clique) == 20
    assert report.clique_exact


def test_master_chain_unknown_finder():
    params = PipelineParams(dense_finder="magic")
    with pytest.raises(ValueError):
        master_chain(complete_graph(5), params)


def test_params_validation():
    with pytest.raises(ValueError):
        PipelineParams(eps=0.3)
    with pytest.raises(ValueError):
        PipelineParams(alpha=0.5)
    with pytest.raises(ValueError):
        PipelineParams(theta_lo=0.8, theta_hi=0.5)
    with pytest.raises(ValueError):
        PipelineParams(eps0=0.001)
    params = PipelineParams().with_overrides(eps=0.02, alpha=None)
    assert params.eps == 0.02
    assert params.alpha == PipelineParams().alpha
    assert params.eps_aux == pytest.approx(0.022)


def clique_number(G) -> int:
    """Largest k such that some k-subset is a clique, by exhaustive search."""
    best = min(G.n, 1)
    closed = [row | (1 << v) for v, row in enumerate(G.rows)]
    for k in range(2, G.n + 1):
        found = False
        for combo in itertools.combinations(range(G.n), k):
            mask = sum(1 << v for v in combo)
            if all(closed[v] & mask == mask for v in combo):
                found = True
                break
        if not found:
            break
        best = k
    return best


@pytest.mark.parametrize("seed", range(5))
def test_exact_clique_matches_exhaustive_search(seed):
    G = generate(GraphSpec("gnp", {"n": 20, "p": 0.5}, seed))
    result = find_max_clique(G)
    assert result.exact
    assert is_clique(G, result.clique)
    assert len(result.clique) == clique_number(G)


def test_improve_clique_escapes_plateau():
    # K4 on 0..3; 4 and 5 see 1, 2, 3 and each other, so {1..5} is the maximum
    edges = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    edges += [(x, w) for x in (4, 5) for w in (1, 2, 3)] + [(4, 5)]
    G = build_graph(edges, 6)
    improved = improve_clique(G, VertexSet.of(range(4)).mask)
    assert VertexSet.from_mask(improved) == VertexSet.of(range(1, 6))


@hsettings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=30), st.floats(min_value=0.0, max_value=1.0), st.integers(0, 2**32))
def test_improve_clique_keeps_a_clique_no_smaller(n, p, seed):
    G = generate(GraphSpec("gnp", {"n": n, "p": p}, seed))
    improved = improve_clique(G, 1)
    assert is_clique(G, VertexSet.from_mask(improved))
    assert improved.bit_count() >= 1


def test_heuristic_clique_search_on_planted_clique():
    G = generate(GraphSpec("gnp", {"n": 80, "p": 0.1}, 6))
    planted = range(15)
    edges = set(G.edges()) | {(u, v) for u in planted for v in planted if u < v}
    G = build_graph(sorted(edges), 80)
    result = find_max_clique(G, limit_exact=10)
    assert not result.exact
    assert is_clique(G, result.clique)
    assert len(result.clique) >= 15


def test_pull_cliques_exact_flag_sticks_after_heuristic_search():
    G = generate(GraphSpec("disjoint_cliques", {"sizes": [12, 12]}))
    pull = pull_cliques(G, PipelineParams(clique_exact_limit=20))
    assert sorted(len(c) for c in pull.cliques) == [12, 12]
    assert not pull.exact
    assert pull_cliques(G, PipelineParams()).exact


def test_pull_cliques_on_empty_graph():
    pull = pull_cliques(generate(GraphSpec("empty", {"n": 20})), PipelineParams())
    assert pull.cliques == ()
    assert len(pull.low_degree_removed) == 20
    assert len(pull.residual) == 0


def test_pull_cliques_on_sparse_random_graph():
    G = generate(GraphSpec("gnp", {"n": 30, "p": 0.3}, 0))
    pull = pull_cliques(G, PipelineParams())
    assert pull.target == 10
    assert pull.cliques == ()
    assert pull.exact
    assert sorted([*pull.residual, *pull.low_degree_removed]) == list(range(30))


def test_master_chain_finds_clique_among_noise():
    cliques = generate(GraphSpec("disjoint_cliques", {"sizes": [20, 20, 20]}))
    noise = generate(GraphSpec("gnp", {"n": 20, "p": 0.2}, 5))
    edges = list(cliques.edges()) + [(u + 60, v + 60) for u, v in noise.edges()]
    G = build_graph(edges, 80)
    report = master_chain(G, PipelineParams())
    assert report.stages[0].met
    assert len(report.clique) == 20
    assert is_clique(G, report.clique)


def test_master_chain_flags_sparse_graph():
    G = generate(GraphSpec("gnp", {"n": 40, "p": 0.2}, 1))
    report = master_chain(G, PipelineParams())
    assert len(report.stages) == 4
    assert not report.stages[0].met
    assert "dense_subgraph" in report.unmet
    assert is_clique(G, report.clique)
