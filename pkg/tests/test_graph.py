from __future__ import annotations

import pytest
from hypothesis import given, settings as hsettings, strategies as st

from conftest import complete_graph, cycle_graph
from surplab.graph import (
    Cut,
    GraphFormatError,
    VertexSet,
    bipartite_edges,
    build_graph,
    clique_union,
    complement,
    cut_evaluate,
    densities_and_degrees,
    edit_distance_to_partition_cliques,
    format_graph,
    induced_subgraph,
    is_clique,
    parse_graph,
    read_graph,
    triangle_count,
)


@st.composite
def graphs(draw, max_n: int = 12):
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return build_graph([p for p, k in zip(pairs, keep) if k], n)


def test_k3_basics(k3):
    assert k3.n == 3 and k3.m == 3
    assert k3.degrees == (2, 2, 2)
    assert triangle_count(k3) == 1
    assert is_clique(k3, VertexSet.of([0, 1, 2]))
    assert densities_and_degrees(k3).edge_density == 1.0


def test_cut_evaluate_c5(c5):
    value = cut_evaluate(c5, Cut((0, 1, 0, 1, 1)))
    assert value.cut_size == 4
    assert value.surplus == 1.5


def test_cut_length_mismatch(k3):
    with pytest.raises(ValueError):
        cut_evaluate(k3, Cut((0, 1)))


def test_vertex_set_must_increase():
    with pytest.raises(ValueError):
        VertexSet((2, 1))
    assert VertexSet.of([3, 1, 3]).members == (1, 3)
    assert VertexSet.from_mask(0b1010).members == (1, 3)


def test_parse_graph_roundtrip(graph_file):
    G = read_graph(graph_file)
    assert G.n == 3 and G.m == 3
    assert parse_graph(format_graph(G)) == G


def test_parse_graph_isolated_vertices_from_header():
    G = parse_graph("n 6\n0 1\n")
    assert G.n == 6 and G.m == 1


@pytest.mark.parametrize(
    "text, line",
    [
        ("n 3\n0 1\n1 1\n", 3),
        ("0 1\nfoo bar\n", 2),
        ("n 2\n0 5\n", 2),
        ("# c\n\n0 1 2\n", 3),
        ("0 1\nn 4\n", 2),
    ],
)
def test_parse_graph_reports_line(text, line):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_complement_of_clique_is_empty():
    assert complement(complete_graph(6)).m == 0


def test_induced_subgraph_relabels():
    H = induced_subgraph(cycle_graph(6), VertexSet.of([1, 2, 3, 5]))
    assert H.n == 4
    assert sorted(H.edges()) == [(0, 1), (1, 2)]


def test_bipartite_edges_need_disjoint_sets(k3):
    assert bipartite_edges(k3, VertexSet.of([0]), VertexSet.of([1, 2])) == 2
    with pytest.raises(ValueError):
        bipartite_edges(k3, VertexSet.of([0, 1]), VertexSet.of([1]))


def test_edit_distance_zero_on_clique_union(two_cliques):
    parts = [VertexSet.of(range(5)), VertexSet.of(range(5, 10))]
    assert edit_distance_to_partition_cliques(two_cliques, parts) == 0
    assert edit_distance_to_partition_cliques(two_cliques, [VertexSet.of(range(10))]) == 25


def test_edit_distance_rejects_bad_partition(k3):
    with pytest.raises(ValueError):
        edit_distance_to_partition_cliques(k3, [VertexSet.of([0, 1])])
    with pytest.raises(ValueError):
        edit_distance_to_partition_cliques(k3, [VertexSet.of([0, 1]), VertexSet.of([1, 2])])


@hsettings(max_examples=60, deadline=None)
@given(graphs())
def test_edit_distance_to_own_components_counts_cross_edges(G):
    halves = [VertexSet.of(range(G.n // 2)), VertexSet.of(range(G.n // 2, G.n))]
    parts = [p for p in halves if len(p)]
    model = clique_union(G.n, parts)
    d = edit_distance_to_partition_cliques(G, parts)
    differing = sum(
        G.has_edge(u, v) != model.has_edge(u, v) for u in range(G.n) for v in range(u + 1, G.n)
    )
    assert d == differing


@hsettings(max_examples=60, deadline=None)
@given(graphs())
def test_adjacency_and_digest_consistent(G):
    assert G.adjacency.sum() == 2 * G.m
    assert parse_graph(format_graph(G)).digest == G.digest
    assert G.m + complement(G).m == G.n * (G.n - 1) // 2
