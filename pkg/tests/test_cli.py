import io
import json
import subprocess
import sys

import pytest

from sepvar import cli, figures
from sepvar.figures import Figure
from sepvar.poset import Regime


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_components_table_tail():
    code, out, _ = run("components", "--p", "4", "--n", "2")
    assert code == 0
    assert out.rstrip("\n").endswith("sdim=44, separating lower bound=20")
    assert "    3     2     44" in out


def test_components_json():
    code, out, _ = run("components", "--p", "4", "--n", "3", "--json")
    d = json.loads(out)
    assert code == 0 and d["counts_by_codim"] == {"0": 1, "1": 3, "2": 9, "3": 11}


def test_counts_tk():
    assert run("counts", "--tk", "6")[:2] == (0, "1 1 3 11 53 309 OK\n")


def test_counts_hertzsprung():
    assert run("counts", "--hertzsprung", "6")[:2] == (0, "1 0 0 2 14 90 OK\n")


def test_counts_mismatch_exits_one(monkeypatch):
    monkeypatch.setattr(cli, "t_count_closed_form", lambda k: -1)
    code, out, _ = run("counts", "--tk", "3")
    assert code == 1 and out.endswith("MISMATCH\n")


def test_poset_dot_stdout():
    code, out, _ = run("poset", "--p", "2", "--n", "2", "--dot", "-")
    assert code == 0
    assert out.count("[label=") == 3 and out.count("->") == 2


def test_poset_files(tmp_path):
    dot, js = tmp_path / "p.dot", tmp_path / "p.json"
    code, out, _ = run("poset", "--p", "3", "--n", "3", "--dot", str(dot), "--json", str(js))
    assert code == 0 and out == ""
    assert dot.read_text().count("->") == 6
    assert len(json.loads(js.read_text())["nodes"]) == 11


def test_bounds():
    code, out, _ = run("bounds", "--p", "4", "--n", "3")
    assert code == 0
    assert "semi-invariant lower bound=20" in out and "semi-invariant dim=18" in out
    assert "sdim=60, separating lower bound=36" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["components", "--p", "4", "--n", "1"],
        ["counts"],
        ["counts", "--tk", "3", "--hertzsprung", "3"],
        ["poset", "--p", "0", "--n", "3"],
        ["poset", "--p", "8", "--n", "3"],
        ["frobnicate"],
        ["verify", "numeric", "--p", "1"],
        [],
    ],
)
def test_usage_errors_exit_two(argv):
    code, _, err = run(*argv)
    assert code == 2 and err


def test_verify_poset_passes():
    code, out, _ = run("verify", "poset", "--max-p", "4")
    assert code == 0
    assert "FAIL" not in out and out.count("PASS") >= 8


def test_verify_poset_injected_failure(monkeypatch):
    bad = Figure("broken", 2, Regime.TWO_MATRICES, {"A": "2, id", "B": "1^2, (12)", "C": "1^2, id"}, (((("A", "B"),), False),))
    monkeypatch.setitem(figures.FIGURES, "broken", bad)
    code, out, _ = run("verify", "poset", "--max-p", "3")
    assert code == 1
    assert "FAIL figure_fixtures" in out


def test_verify_numeric_small(tmp_path):
    js = tmp_path / "r.json"
    code, out, _ = run("verify", "numeric", "--p", "3", "--n", "3", "--trials", "100", "--seed", "1", "--json", str(js))
    assert code == 0, out
    records = json.loads(js.read_text())
    assert all(set(r) == {"check", "params", "seed", "trials", "failures", "max_residual"} for r in records)


def test_verify_numeric_failure_exit(monkeypatch):
    from sepvar import matrixlab

    monkeypatch.setattr(matrixlab, "rank_condition", lambda *a, **k: False)
    code, out, _ = run("verify", "numeric", "--p", "2", "--n", "3", "--trials", "20")
    assert code == 1 and "FAIL rank_condition_n2_scalar_true" in out


COMMANDS = [
    ["poset", "--p", "3", "--n", "2", "--dot", "-"],
    ["poset", "--p", "3", "--n", "3", "--json", "-"],
    ["poset", "--p", "4", "--n", "2"],
    ["components", "--p", "4", "--n", "2"],
    ["components", "--p", "4", "--n", "3", "--json", "-"],
    ["counts", "--tk", "8"],
    ["counts", "--hertzsprung", "8"],
    ["bounds", "--p", "5", "--n", "4"],
    ["verify", "poset", "--max-p", "4"],
    ["verify", "numeric", "--p", "3", "--n", "3", "--trials", "30", "--seed", "7"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a))
def test_byte_identical_subprocess(argv):
    runs = [
        subprocess.run([sys.executable, "-m", "sepvar", *argv], capture_output=True, check=False)
        for _ in range(2)
    ]
    assert runs[0].returncode == 0, runs[0].stderr
    assert runs[0].stdout == runs[1].stdout and runs[0].stdout
