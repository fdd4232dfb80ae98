import json
import shutil
import subprocess

import pytest

from cqtl import fixture_path
from cqtl.cli import main, run_check
from cqtl.results import load_json

RUNNING = str(fixture_path("running.cm"))
TWOSTATE = str(fixture_path("twostate.cm"))


@pytest.fixture(autouse=True)
def no_color(monkeypatch):
    monkeypatch.setenv("CQTL_COLOR", "0")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def per_world(out):
    doc = json.loads(out)
    return {e["world"]: [next(iter(r.values())) for r in e["assignments"]] for e in doc["perWorld"]}


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", RUNNING)
    assert code == 0 and "3 world(s), 4 transition(s)" in out


def test_node_merging_command(capsys):
    code, out, _ = run(capsys, "check", RUNNING, "-c", "y:node",
                       "-f", "exists x:node. (x != y & X[x = y])", "--json")
    assert code == 0
    assert per_world(out) == {"w0": ["n0", "n2"], "w1": ["n3", "n4"], "w2": []}


def test_deallocation_command(capsys):
    code, out, _ = run(capsys, "check", RUNNING, "-c", "x:edge", "-f", "present(x) & WX[false]", "--json")
    assert code == 0
    assert per_world(out) == {"w0": ["e2"], "w1": [], "w2": []}


def test_toy_model_command(capsys):
    code, out, _ = run(capsys, "check", TWOSTATE, "-c", "x:item",
                       "-f", "present(x) & X[X[present(x)]]", "--json")
    assert code == 0
    assert per_world(out) == {"s0": [], "s1": []}


def test_json_output_is_byte_stable(capsys):
    argv = ["check", RUNNING, "-c", "x:edge", "-f", "nextStepPreserved(x)", "--json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    doc = load_json(first)
    assert doc.stats == {"configCount": 0, "fixpointRounds": 0}


def test_world_filter_and_require_sat(capsys):
    code, out, _ = run(capsys, "check", RUNNING, "-c", "x:edge", "-f", "present(x) & WX[false]",
                       "--world", "w0", "--json", "--require-sat")
    assert code == 0 and list(per_world(out)) == ["w0"]
    code, _, _ = run(capsys, "check", RUNNING, "-c", "x:edge", "-f", "present(x) & WX[false]",
                     "--require-sat")
    assert code == 1


def test_oracle_command_and_compare(capsys):
    code, out, _ = run(capsys, "oracle", RUNNING, "-c", "x:edge", "-f", "[] present(x)", "--json")
    assert code == 0
    assert per_world(out) == {"w0": [], "w1": [], "w2": ["e5"]}
    assert json.loads(out)["stats"]["configCount"] == 7
    code, _, _ = run(capsys, "check", RUNNING, "-c", "x:edge", "-f", "[] present(x)",
                     "--oracle", "--compare")
    assert code == 0


def test_compare_reports_disagreement(running, monkeypatch):
    from cqtl.oracle import OracleEvaluator
    monkeypatch.setattr(OracleEvaluator, "wnext_op", lambda self, a: self.bottom(a.context))
    _, agreed = run_check(running, "present(x) & WX[false]", "x:edge", compare=True)
    assert agreed is False
    assert main(["check", RUNNING, "-c", "x:edge", "-f", "present(x) & WX[false]",
                 "--oracle", "--compare"]) == 3


def test_expand_eq_agrees(capsys):
    argv = ["check", RUNNING, "-c", "y:node", "-f", "exists x:node. (x != y & X[x = y])", "--json"]
    _, plain, _ = run(capsys, *argv)
    _, expanded, _ = run(capsys, *argv, "--expand-eq")
    assert per_world(plain) == per_world(expanded)


def test_errors_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "check", RUNNING, "-f", "not X[true]")
    assert code == 2 and "NegationBelowTemporal" in err
    code, _, err = run(capsys, "check", RUNNING, "-c", "y:node", "-f", "x = y")
    assert code == 2 and "UnboundVariable" in err
    empty = tmp_path / "empty.cm"
    empty.write_text("")
    code, _, err = run(capsys, "validate", str(empty))
    assert code == 2 and "ParseError" in err
    code, _, _ = run(capsys, "check", RUNNING, "-c", "N:Set(node)", "-f", "true", "--max-so-carrier", "2")
    assert code == 2


def test_formula_file_and_text_output(capsys, tmp_path):
    f = tmp_path / "q.qltl"
    f.write_text("nextStepPreserved(x)\n")
    code, out, _ = run(capsys, "check", RUNNING, "-c", "x:edge", "--formula-file", str(f))
    assert code == 0
    assert "w0: {x=e0}, {x=e1}" in out and "w1: -" in out


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "check", RUNNING, "-f", "true", "--json", "--timing")
    assert "elapsedMs" in json.loads(out)["stats"]


def test_trace(capsys):
    code, out, _ = run(capsys, "trace", RUNNING, "--start", "e0@w0", "--path", "f0,f2")
    assert code == 0
    assert [line.split()[-1] for line in out.splitlines()] == ["e0@w0", "e3@w1", "DEAD"]


@pytest.mark.skipif(shutil.which("cqtl") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["cqtl", "validate", RUNNING], capture_output=True, text=True)
    assert proc.returncode == 0
