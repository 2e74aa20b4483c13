from __future__ import annotations

import pytest
from hypothesis import given, settings as hsettings, strategies as st

from surplab.generators import FAMILIES, GraphSpec, SpecError, generate, philox, sample_indices
from surplab.graph import edit_distance_to_partition_cliques
from surplab.generators import block_parts


def test_same_spec_same_graph():
    spec = GraphSpec("gnp", {"n": 30, "p": 0.3}, 42)
    assert generate(spec) == generate(spec)
    assert generate(spec) != generate(GraphSpec("gnp", {"n": 30, "p": 0.3}, 43))


@pytest.mark.parametrize(
    "spec, n, m",
    [
        (GraphSpec("complete", {"n": 7}), 7, 21),
        (GraphSpec("empty", {"n": 4}), 4, 0),
        (GraphSpec("disjoint_cliques", {"sizes": [3, 4]}), 7, 9),
        (GraphSpec("two_overlapping_cliques", {"a": 2, "b": 3, "c": 2}), 7, 15),
        (GraphSpec("complete_bipartite", {"a": 3, "b": 5}), 8, 15),
        (GraphSpec("turan", {"n": 7, "r": 3}), 7, 16),
        (GraphSpec("paley", {"q": 13}), 13, 39),
        (GraphSpec("clique_minus_matching", {"n": 8}), 8, 24),
    ],
)
def test_family_sizes(spec, n, m):
    G = generate(spec)
    assert (G.n, G.m) == (n, m)


@hsettings(max_examples=30, deadline=None)
@given(
    st.lists(st.integers(min_value=1, max_value=8), min_size=1, max_size=5),
    st.integers(min_value=0, max_value=15),
    st.integers(min_value=0, max_value=2**64 - 1),
)
def test_perturbed_union_flips_exactly(sizes, flips, seed):
    n = sum(sizes)
    flips = min(flips, n * (n - 1) // 2)
    G = generate(GraphSpec("perturbed_clique_union", {"sizes": sizes, "flips": flips}, seed))
    assert edit_distance_to_partition_cliques(G, block_parts(sizes)) == flips


@pytest.mark.parametrize(
    "data, field",
    [
        ({"family": "gnp", "params": {"n": 5, "p": 1.5}}, "p"),
        ({"family": "gnp", "params": {"p": 0.5}}, "n"),
        ({"family": "gnp", "params": {"n": -1, "p": 0.5}}, "n"),
        ({"family": "paley", "params": {"q": 7}}, "q"),
        ({"family": "disjoint_cliques", "params": {"sizes": []}}, "sizes"),
        ({"family": "perturbed_clique_union", "params": {"sizes": [2], "flips": 2}}, "flips"),
        ({"family": "nope"}, "family"),
        ({"family": "empty", "params": {"n": 2}, "seed": 2**64}, "seed"),
    ],
)
def test_spec_errors_name_the_field(data, field):
    with pytest.raises(SpecError) as info:
        generate(GraphSpec.from_dict(data))
    assert info.value.field == field


def test_missing_family():
    with pytest.raises(SpecError):
        GraphSpec.from_dict({"params": {}})


def test_flat_spec_params():
    spec = GraphSpec.from_dict({"family": "gnp", "n": 10, "p": 0.5, "seed": 3})
    assert spec.params == {"n": 10, "p": 0.5}
    assert spec.to_dict() == {"family": "gnp", "params": {"n": 10, "p": 0.5}, "seed": 3}


def test_philox_stream_is_reproducible():
    assert philox(7).random(4).tolist() == philox(7).random(4).tolist()
    with pytest.raises(SpecError):
        philox(-1)


def test_every_family_registered():
    assert set(FAMILIES) >= {"gnp", "disjoint_cliques", "perturbed_clique_union", "paley"}


@hsettings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=200), st.data(), st.integers(0, 2**64 - 1))
def test_sample_indices_are_distinct_smallest_draws(population, data, seed):
    k = data.draw(st.integers(min_value=0, max_value=population))
    chosen = sample_indices(philox(seed), population, k)
    assert len(set(chosen.tolist())) == k
    assert all(0 <= i < population for i in chosen.tolist())
    draws = philox(seed).random(population)
    if k < population:
        assert draws[chosen].max(initial=0.0) <= draws[sample_indices(philox(seed), population, population)[k]]


def test_sample_indices_rejects_oversized_draw():
    with pytest.raises(ValueError):
        sample_indices(philox(0), 3, 4)
