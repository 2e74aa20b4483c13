"""Shared graph fixtures."""
from __future__ import annotations

import pytest

from surplab.graph import Graph, build_graph, clique_union, VertexSet


def complete_graph(n: int) -> Graph:
    return build_graph([(u, v) for u in range(n) for v in range(u + 1, n)], n)


def cycle_graph(n: int) -> Graph:
    return build_graph([(v, (v + 1) % n) for v in range(n)], n)


@pytest.fixture
def k3() -> Graph:
    return complete_graph(3)


@pytest.fixture
def c5() -> Graph:
    return cycle_graph(5)


@pytest.fixture
def two_cliques() -> Graph:
    return clique_union(10, [VertexSet.of(range(5)), VertexSet.of(range(5, 10))])


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "k3.txt"
    path.write_text("# triangle\nn 3\n0 1\n1 2\n0 2\n")
    return path
