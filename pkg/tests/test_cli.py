from __future__ import annotations

import json

import pytest
from sqlalchemy import func, select

from surplab.database import get_session_factory
from surplab.main import build_parser, run
from surplab.models import Run
from surplab.report import dumps

DISJOINT = '{"family": "disjoint_cliques", "params": {"sizes": [12, 12]}, "seed": 0}'


def load_without_timing(path) -> str:
    data = json.loads(path.read_text())
    data.pop("timing")
    return dumps(data)


def test_maxcut_on_triangle(graph_file, capsys):
    assert run(["maxcut", str(graph_file)]) == 0
    out = capsys.readouterr().out
    assert "MaxCut (exact): value 2, surplus 0.5" in out


def test_maxcut_json_report(graph_file, tmp_path):
    path = tmp_path / "r.json"
    assert run(["maxcut", str(graph_file), "--json", str(path)]) == 0
    data = json.loads(path.read_text())
    assert data["command"] == "maxcut"
    assert data["findings"]["maxcut"]["value"] == 2
    assert data["findings"]["edwards_holds"] is True
    assert data["findings"]["graph"]["n"] == 3


def test_stability_on_generated_clique_union(tmp_path, capsys):
    path = tmp_path / "s.json"
    model = tmp_path / "model.txt"
    assert run(["stability", "--spec", DISJOINT, "--json", str(path), "--model", str(model)]) == 0
    stability = json.loads(path.read_text())["findings"]["stability"]
    assert stability["status"] == "certified"
    assert stability["closeness"] == 0.0
    assert stability["edit_distance"] == 0
    assert model.read_text().startswith("n 24\n")
    assert "closeness 0" in capsys.readouterr().out


def test_stability_not_certified_exit_code():
    spec = '{"family": "gnp", "params": {"n": 60, "p": 0.5}, "seed": 2}'
    assert run(["stability", "--spec", spec]) == 2


def test_malformed_graph_file(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("n 3\n0 1\n1 x\n")
    assert run(["maxcut", str(path)]) == 1
    assert "line 3" in capsys.readouterr().err


def test_missing_graph_file(tmp_path):
    assert run(["maxcut", str(tmp_path / "absent.txt")]) == 1


def test_missing_input():
    assert run(["maxcut"]) == 1


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["--eps", "0.5"], "--eps"),
        (["--alpha0", "0.01"], "--alpha0"),
        (["--exact-limit", "0"], "--exact-limit"),
    ],
)
def test_invalid_params_name_the_flag(graph_file, capsys, argv, flag):
    assert run(["maxcut", str(graph_file), *argv]) == 1
    assert flag in capsys.readouterr().err


def test_exact_limit_refusal(graph_file, capsys):
    assert run(["maxcut", str(graph_file), "--method", "exact", "--exact-limit", "2"]) == 1
    assert "limit 2" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["nope"], ["maxcut", "--workers", "0"], ["verify", "--seed", "-1"]])
def test_argparse_errors_exit_one(argv):
    assert run(argv) == 1


def test_help_exits_zero():
    assert run(["--help"]) == 0


def test_verify_small_weyl_sweep(capsys):
    assert run(["verify", "--suite", "weyl", "--count", "5", "--seed", "1"]) == 0
    assert "5/5" in capsys.readouterr().out


def test_identical_runs_give_identical_json(tmp_path):
    spec = '{"family": "gnp", "params": {"n": 10, "p": 0.5}, "seed": 4}'
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["certify", "--spec", spec, "--json", str(first)]) == 0
    assert run(["certify", "--spec", spec, "--json", str(second)]) == 0
    assert load_without_timing(first) == load_without_timing(second)


def test_certify_two_clique(capsys):
    assert run(["certify", "--two-clique", "3", "3", "2"]) == 0
    assert "Two cliques (3, 3, 2)" in capsys.readouterr().out


def test_certify_two_clique_rejects_graph_input(graph_file):
    assert run(["certify", str(graph_file), "--two-clique", "1", "1", "1"]) == 1


def test_certify_with_partition(graph_file, tmp_path):
    path = tmp_path / "c.json"
    assert run(["certify", str(graph_file), "--partition", "0", "--json", str(path)]) == 0
    kinds = [c["kind"] for c in json.loads(path.read_text())["findings"]["certificates"]]
    assert kinds[:3] == ["NegEigenSum", "NegEigenSquares", "NegEigenCubes"]
    assert kinds[-1] in ("ExplicitCut", "BiasedCut")


def test_spectrum_of_cycle(tmp_path):
    path = tmp_path / "spec.json"
    spec = '{"family": "complete_bipartite", "params": {"a": 3, "b": 3}}'
    assert run(["spectrum", "--spec", spec, "--json", str(path)]) == 0
    spectrum = json.loads(path.read_text())["findings"]["spectrum"]
    assert spectrum["eigenvalues"][0] == pytest.approx(3.0)
    assert spectrum["symmetry_gap"] < 1e-8


@pytest.mark.parametrize("stage", ["chain", "iterate", "balanced", "step"])
def test_extract_stages_on_clique(stage):
    assert run(["extract", "--spec", '{"family": "complete", "params": {"n": 20}}', "--stage", stage]) == 0


def test_gen_to_stdout_and_file(tmp_path, capsys):
    assert run(["gen", "--family", "complete", "--param", "n=4"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("n 4\n0 1\n")

    path = tmp_path / "g.txt"
    assert run(["gen", "--family", "gnp", "--param", "n=12", "--param", "p=0.5", "--seed", "5", "-o", str(path)]) == 0
    assert run(["maxcut", str(path)]) == 0


def test_gen_rejects_bad_param():
    assert run(["gen", "--family", "gnp", "--param", "n=5", "--param", "p=2"]) == 1
    assert run(["gen", "--family", "gnp", "--param", "oops"]) == 1


def test_archive_records_runs(graph_file, tmp_path):
    url = f"sqlite:///{tmp_path / 'runs.db'}"
    assert run(["maxcut", str(graph_file), "--archive", url]) == 0
    assert run(["verify", "--suite", "lemma54", "--archive", url]) == 0
    with get_session_factory(url)() as s:
        assert s.scalar(select(func.count()).select_from(Run)) == 2
        verify_run = s.scalars(select(Run).where(Run.command == "verify")).one()
        assert [o.suite for o in verify_run.suites] == ["lemma54"]


def test_migrate_command(tmp_path):
    url = f"sqlite:///{tmp_path / 'm.db'}"
    assert run(["migrate", "--archive", url]) == 0


def test_every_command_registered():
    parser = build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    assert set(sub.choices) == {"maxcut", "certify", "spectrum", "extract", "stability", "gen", "verify", "migrate"}
