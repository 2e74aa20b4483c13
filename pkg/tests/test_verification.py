from __future__ import annotations

import pytest

from surplab.generators import GraphSpec, philox
from surplab.params import PipelineParams
from surplab.report import dumps
from surplab.verification import DEFAULT_COUNTS, SUITES, SuiteResult, random_partition, run_suites

FAST = [name for name in SUITES if name != "stability"]


@pytest.mark.parametrize("name", FAST)
def test_suite_passes_on_small_sample(name):
    (result,) = run_suites(name, count=3, seed=7)
    assert result.name == name
    assert result.ok, result.failures
    assert result.total >= 3 or name == "lemma54"


@pytest.mark.slow
def test_stability_suite():
    (result,) = run_suites("stability", count=2, seed=1)
    assert result.ok, result.failures
    assert result.total == 4


@pytest.mark.slow
def test_weyl_acceptance_sweep():
    (result,) = run_suites("weyl", count=200, seed=1)
    assert (result.passed, result.total) == (200, 200)


def test_exhaustive_two_clique_suite_ignores_count():
    (result,) = run_suites("lemma54", count=0)
    assert result.total == 64
    assert result.ok


def test_same_seed_same_results():
    first = run_suites("lemma24", count=5, seed=11)
    second = run_suites("lemma24", count=5, seed=11)
    assert dumps({"suites": first}) == dumps({"suites": second})


def test_zero_count_runs_fixed_cases_only():
    (result,) = run_suites("edwards", count=0)
    assert result.total == 3


def test_all_covers_every_suite(monkeypatch):
    calls = []

    def fake(name):
        def run(count, seed, params, workers):
            calls.append((name, count))
            return SuiteResult(name, 1, 1, 0.0, seed)
        return run

    for name in SUITES:
        monkeypatch.setitem(SUITES, name, fake(name))
    results = run_suites("all")
    assert [r.name for r in results] == list(SUITES)
    assert calls == [(name, DEFAULT_COUNTS[name]) for name in SUITES]


@pytest.mark.parametrize("kwargs", [{"name": "nope"}, {"name": "weyl", "count": -1}])
def test_bad_arguments(kwargs):
    with pytest.raises(ValueError):
        run_suites(**kwargs)


def test_custom_params_are_used():
    (result,) = run_suites("lemma31", count=2, seed=3, params=PipelineParams(eps=0.02))
    assert result.ok


@pytest.mark.slow
@pytest.mark.parametrize("name", [name for name in SUITES if name != "weyl"])
def test_suite_at_default_count(name):
    (result,) = run_suites(name)
    assert result.ok, result.failures
    assert result.total >= DEFAULT_COUNTS[name] or name == "lemma54"


def test_partition_draws_are_keyed_apart_from_the_graph():
    spec = GraphSpec("gnp", {"n": 64, "p": 0.5}, 12345)
    X, Y = random_partition(spec, 64)
    assert sorted([*X, *Y]) == list(range(64))
    assert random_partition(spec, 64) == (X, Y)
    edge_stream = (philox(spec.seed).random(64) < 0.5).nonzero()[0].tolist()
    assert list(X) != edge_stream
