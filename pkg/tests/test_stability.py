from __future__ import annotations

import numpy as np
import pytest

from conftest import complete_graph
from surplab.generators import GraphSpec, generate
from surplab.graph import VertexSet, build_graph, edit_distance_to_partition_cliques
from surplab.params import PipelineParams
from surplab.stability import (
    absorb_residual,
    build_clique_graph,
    cherry_audit,
    classify_blocks,
    find_cherry,
    label_for,
    rank1_boolean_round,
    stability_certificate,
    top_singular_pair,
)


def chained_cliques(size: int):
    """Three cliques A, B, C with A-B and B-C complete bipartite and no A-C edges."""
    A = list(range(size))
    B = list(range(size, 2 * size))
    C = list(range(2 * size, 3 * size))
    edges = []
    for group in (A, B, C):
        edges += [(u, v) for i, u in enumerate(group) for v in group[i + 1:]]
    edges += [(a, b) for a in A for b in B]
    edges += [(b, c) for b in B for c in C]
    return build_graph(edges, 3 * size)


def test_rank1_rounding_recovers_exact_rectangle():
    x = np.array([1, 1, 0, 1])
    y = np.array([0, 1, 1])
    A = np.outer(x, y)
    u, v, sigma = top_singular_pair(A)
    result = rank1_boolean_round(A, u, v)
    assert sigma == pytest.approx(np.sqrt(6))
    assert result.error == 0
    assert result.x.tolist() == x.tolist()
    assert result.y.tolist() == y.tolist()


def test_rank1_rounding_delta_uses_signed_vectors():
    result = rank1_boolean_round(np.ones((2, 2)), np.array([1.0, -1.0]), np.ones(2))
    assert result.delta == pytest.approx(2.0)
    assert result.alpha == pytest.approx(2.0 ** (1 / 6))
    assert result.x.tolist() == [0, 0]
    assert result.error == 4


def test_rank1_rounding_degenerate_input():
    A = np.ones((2, 2))
    result = rank1_boolean_round(A, np.zeros(2), np.ones(2))
    assert result.degenerate
    assert result.error == 4


def test_rank1_rounding_shape_mismatch():
    with pytest.raises(ValueError):
        rank1_boolean_round(np.ones((2, 3)), np.ones(3), np.ones(3))


@pytest.mark.parametrize(
    "density, label",
    [(0.0, "Sparse"), (0.25, "Sparse"), (0.5, "Ambiguous"), (0.75, "Dense"), (1.0, "Dense")],
)
def test_label_for(density, label):
    assert label_for(density, 0.25, 0.75) == label


def test_classify_blocks_on_chained_cliques():
    G = chained_cliques(4)
    cliques = [VertexSet.of(range(0, 4)), VertexSet.of(range(4, 8)), VertexSet.of(range(8, 12))]
    blocks = classify_blocks(G, cliques)
    labels = {(b.i, b.j): b.label for b in blocks.blocks}
    assert labels == {(0, 1): "Dense", (0, 2): "Sparse", (1, 2): "Dense"}
    assert all(b.rectangle_error == 0 for b in blocks.blocks)

    gamma = build_clique_graph(blocks, cliques)
    audit = cherry_audit(gamma)
    assert not audit.cherry_free
    assert audit.witness == (0, 1, 2)


def test_classify_blocks_rejects_overlap(k3):
    with pytest.raises(ValueError):
        classify_blocks(k3, [VertexSet.of([0, 1]), VertexSet.of([1, 2])])


def test_find_cherry():
    assert find_cherry(build_graph([(0, 1), (1, 2)], 3)) == (0, 1, 2)
    assert find_cherry(complete_graph(4)) is None


def test_cherry_free_graph_clusters():
    gamma = build_graph([(0, 1), (2, 3), (3, 4), (2, 4)], 6)
    audit = cherry_audit(gamma)
    assert audit.cherry_free
    assert [c.members for c in audit.clusters] == [(0, 1), (2, 3, 4), (5,)]


def test_absorb_residual():
    G = build_graph([(u, v) for u in range(5) for v in range(u + 1, 5)] + [(5, v) for v in range(5)] + [(6, 0), (6, 1)], 7)
    placed = absorb_residual(G, [VertexSet.of(range(5))], VertexSet.of([5, 6]), 0.25, 0.75)
    assert placed == {5: 0}


def test_exact_clique_union_is_certified_with_zero_distance():
    G = generate(GraphSpec("disjoint_cliques", {"sizes": [12, 12]}))
    report = stability_certificate(G, PipelineParams())
    assert report.certified
    assert report.edit_distance == 0
    assert report.closeness == 0.0
    assert report.uncovered_edges == 0
    assert report.model == G
    assert len(report.clusters) == 2


def test_perturbed_clique_union_is_certified():
    sizes = [15, 15, 15, 15]
    G = generate(GraphSpec("perturbed_clique_union", {"sizes": sizes, "flips": 10}, 3))
    report = stability_certificate(G, PipelineParams())
    assert report.certified
    assert report.edit_distance <= 30
    assert edit_distance_to_partition_cliques(G, report.parts) == report.edit_distance
    assert report.closeness == pytest.approx(report.edit_distance / 60**2)


def test_random_graph_is_not_certified():
    G = generate(GraphSpec("gnp", {"n": 60, "p": 0.5}, 2))
    report = stability_certificate(G, PipelineParams())
    assert not report.certified
    assert report.status == "residual_too_large"
    assert report.model is None and report.edit_distance is None
    assert report.failure["uncovered_edges"] > report.failure["allowed"]


def test_half_dense_block_is_ambiguous():
    G = chained_cliques(12)
    report = stability_certificate(G, PipelineParams(max_uncovered_fraction=1.0))
    assert report.status == "ambiguous_failure"
    assert report.failure["density"] == pytest.approx(0.5)


def test_eigen_gate_reports_claim_bound():
    G = generate(GraphSpec("disjoint_cliques", {"sizes": [12, 12]}))
    gate = stability_certificate(G, PipelineParams()).eigen_gate
    assert gate.lambda_min_abs == pytest.approx(1.0)
    assert gate.surplus_bound == pytest.approx(6.0)
