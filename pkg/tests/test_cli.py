import json
import subprocess
import sys

import pytest

from expcut.cli import main
from expcut.expansion import deep_sequent
from expcut.parser import parse_formula, parse_proof

from conftest import fixture_path, load_exp

EX = str(fixture_path("exp/cut_example.exp"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_ok_and_failure(capsys):
    assert run(capsys, "check", EX)[0] == 0
    code, out, _ = run(capsys, "check", str(fixture_path("exp/cut_example_broken.exp")))
    assert code == 1 and "countermodel" in out


def test_check_lk_and_formulas(capsys, tmp_path):
    assert run(capsys, "check", str(fixture_path("lk/cut_example.lk")))[0] == 0
    doc = tmp_path / "f.txt"
    doc.write_text("formula A = ex x (P(x) | ex x Q(x));\n")
    code, out, _ = run(capsys, "check", str(doc))
    assert code == 0 and out.startswith("A = ex x (P(x) | ex x_1 Q(x_1))")


@pytest.mark.parametrize("text", ["", "tree P(a", "cut(P(a));", "{not json"])
def test_parse_errors_exit_2(capsys, tmp_path, text):
    f = tmp_path / "bad.exp"
    f.write_text(text)
    code, _, err = run(capsys, "check", str(f))
    assert code == 2 and err.startswith("error:")


def test_usage_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "check", str(tmp_path / "missing.exp"))[0] == 2


def test_elim_walkthrough(capsys, tmp_path):
    trace = tmp_path / "trace.json"
    code, out, _ = run(capsys, "elim", str(fixture_path("exp/quantifier_walkthrough.exp")),
                       "--trace", str(trace), "--assert-invariants")
    assert code == 0
    q = parse_proof(out)
    assert not q.cuts
    steps = json.loads(trace.read_text())
    assert steps[0]["kind"] == "quantifier" and steps[0]["terms"] == ["0", "f(f(0))"]
    assert steps[0]["measure"][1] < steps[0]["measure"][0]


def test_elim_json(capsys):
    code, out, _ = run(capsys, "elim", EX, "--json")
    assert code == 0
    d = json.loads(out)
    assert d["cuts"] == []


def test_elim_assert_invariants_reports_cycle(capsys):
    code, _, err = run(capsys, "elim", str(fixture_path("exp/forest_counterexample.exp")), "--assert-invariants")
    assert code == 1 and "cyclic dependency" in err


def test_deps_text_and_dot(capsys):
    code, out, _ = run(capsys, "deps", EX)
    assert code == 0 and len(out.splitlines()) == 10
    assert "∀gamma <0 ∃f(gamma)  (1)" in out.splitlines()
    code, out, _ = run(capsys, "deps", EX, "--dot")
    assert out.startswith("digraph deps {") and out.count("->") == 10


def test_deps_cycle_exit_1(capsys, tmp_path):
    f = tmp_path / "cyc.exp"
    f.write_text("tree ex x all y (P(x) | ~P(y)) [+alpha all y (P(alpha) | ~P(y)) [+^alpha P(alpha) | ~P(alpha)]];")
    code, _, err = run(capsys, "deps", str(f))
    assert code == 1 and err.startswith("cycle:")


def test_dp_and_sh(capsys):
    code, out, _ = run(capsys, "dp", EX)
    names = ("alpha", "beta", "gamma")
    assert {parse_formula(l, variables=names) for l in out.splitlines()} == set(deep_sequent(load_exp("cut_example")))
    code, out, _ = run(capsys, "sh", EX)
    assert out.splitlines() == ["all y ex x (P(x) & ~Q(f(y)))", "~P(a) | ex z Q(z)"]


def test_to_lk_from_lk_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "to-lk", EX)
    assert code == 0
    lk = tmp_path / "p.lk"
    lk.write_text(out)
    assert run(capsys, "check", str(lk))[0] == 0
    code, out, _ = run(capsys, "from-lk", str(lk))
    assert code == 0
    back = tmp_path / "back.exp"
    back.write_text(out)
    assert run(capsys, "check", str(back))[0] == 0
    code, out, _ = run(capsys, "to-lk", EX, "--json")
    assert json.loads(out)["rule"] == "or" and "\"rule\": \"cut\"" in out


def test_json_input(capsys, tmp_path):
    code, out, _ = run(capsys, "elim", EX, "--json")
    f = tmp_path / "nf.json"
    f.write_text(out)
    assert run(capsys, "check", str(f))[0] == 0


def test_from_lk_rejects_expansion_proof(capsys):
    assert run(capsys, "from-lk", EX)[0] == 2


def test_explore_confluence(capsys):
    code, out, _ = run(capsys, "explore", str(fixture_path("exp/confluence.exp")), "--depth", "10", "--show", "1")
    assert code == 0
    assert out.splitlines()[0] == "2 normal forms"
    assert "--- normal form 1" in out and "--- diverging first steps: ex x P(x) / ex x Q(x)" in out


def test_merge(capsys):
    code, out, _ = run(capsys, "merge", str(fixture_path("exp/merge_a.exp")), str(fixture_path("exp/merge_b.exp")))
    assert code == 0
    assert out == "tree ex x P(x) [+a P(a) +b P(b)];\ntree ~P(a);\ntree ~P(b);\n"


def test_stdin_and_console_script():
    text = fixture_path("exp/cut_example.exp").read_text()
    r = subprocess.run([sys.executable, "-m", "expcut.cli", "check", "-"], input=text, capture_output=True,
                       text=True)
    assert r.returncode == 0 and "ok: expansion proof" in r.stdout
