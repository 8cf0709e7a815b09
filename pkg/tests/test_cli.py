import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from cpgeo import library
from cpgeo.cli import main
from cpgeo.report import run_verify

GOLDEN = Path(__file__).parent / "golden"

BROKEN_JACOBI = """\
ALGEBRA
  basis e1 e2 e3
BRACKETS
  [e1, e2] = e3
  [e1, e3] = e1
PAIR
  alpha1 = a1
  alpha2 = a2
METRIC
  diag 1 1 1
PHI
  e1 -> 0*e1
"""


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, list(args), catch_exceptions=False)


class TestGolden:
    def test_g6(self, runner):
        r = invoke(runner, "verify", "--example", "g6", "--json")
        assert r.exit_code == 0
        assert r.output == (GOLDEN / "g6.json").read_text()

    def test_h6_leaf(self, runner):
        r = invoke(runner, "verify", "--example", "h6", "--subspace", "leaf(a=1,b=2)", "--json")
        assert r.exit_code == 0
        assert r.output == (GOLDEN / "h6_leaf12.json").read_text()

    def test_deterministic(self, runner):
        first = invoke(runner, "verify", "--example", "g6", "--json").output
        second = invoke(runner, "verify", "--example", "g6", "--json").output
        assert first == second


class TestVerify:
    def test_g6_only_normality_fails(self):
        rep = run_verify(library.load("g6"))
        fails = [r.id for r in rep.records if r.verdict == "fail"]
        assert fails == ["pair.normality"]
        assert rep.get("pair.normality").expected_fail
        assert rep.get("pair.normality").witness == ("Y3", "Y4")

    def test_without_annotation_exit_code_is_one(self, runner, tmp_path):
        path = tmp_path / "g6.txt"
        path.write_text(library.G6.replace("EXPECT\n  fail pair.normality\n", ""))
        r = invoke(runner, "verify", str(path))
        assert r.exit_code == 1
        assert "FAIL    pair.normality" in r.output
        r = invoke(runner, "verify", str(path), "--expect-fail", "pair.normality")
        assert r.exit_code == 0

    def test_h6_leaf_all_pass(self):
        rep = run_verify(library.load("h6"), ["leaf(a=1,b=2)"])
        assert all(r.verdict != "fail" for r in rep.records)
        induced = rep.get("subspace[leaf(a=1,b=2)].induced")
        assert induced.verdict == "pass"
        assert induced.values["f_normal"] is True

    def test_broken_jacobi(self, runner, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text(BROKEN_JACOBI)
        r = invoke(runner, "verify", str(path), "--json")
        assert r.exit_code == 1
        data = json.loads(r.output)
        verdicts = [c["verdict"] for c in data["checks"]]
        assert data["checks"][0]["id"] == "algebra.jacobi"
        assert verdicts[0] == "fail" and set(verdicts[1:]) == {"skipped"}
        assert data["checks"][0]["values"]["cyclic_sum"] == ["0", "0", "1"]

    def test_every_check_once(self):
        rep = run_verify(library.load("g6"), ["TF2", "leaf(a=1,b=1)"])
        ids = [r.id for r in rep.records]
        assert len(ids) == len(set(ids))
        assert {r.verdict for r in rep.records} <= {"pass", "fail", "skipped"}

    def test_bad_subspace_is_recorded(self):
        rep = run_verify(library.load("g6"), ["span(Y3, Y4)"])
        assert rep.get("subspace[span(Y3, Y4)].analyze").verdict == "fail"
        assert rep.get("subspace[span(Y3, Y4)].classify").verdict == "skipped"

    def test_input_errors_exit_two(self, runner, tmp_path):
        assert invoke(runner, "verify", str(tmp_path / "missing.txt")).exit_code == 2
        bad = tmp_path / "bad.txt"
        bad.write_text("ALGEBRA\n  basis X\n  junk\n")
        r = invoke(runner, "verify", str(bad))
        assert r.exit_code == 2 and "line 3" in r.output
        assert invoke(runner, "verify", "--example", "nope").exit_code == 2
        assert invoke(runner, "verify").exit_code == 2

    def test_text_report(self, runner):
        r = invoke(runner, "verify", "--example", "heis3xR")
        assert r.exit_code == 0
        assert "PASS    type_h0.product" in r.output


class TestOtherCommands:
    def test_examples(self, runner):
        r = invoke(runner, "examples", "list")
        assert [line.split()[0] for line in r.output.splitlines()] == library.names()
        r = invoke(runner, "examples", "show", "h6")
        assert r.output == library.H6
        assert invoke(runner, "examples", "show", "nope").exit_code == 2

    def test_classify(self, runner):
        r = invoke(runner, "classify", "--example", "g6", "--subspace", "leaf(a=1,b=2)")
        assert r.exit_code == 0
        assert "case: Leaning" in r.output and "cos^2 theta1: 1/17" in r.output and "tan theta1: 4" in r.output

    def test_classify_file(self, runner, tmp_path):
        path = tmp_path / "h6.txt"
        path.write_text(library.H6)
        r = invoke(runner, "classify", str(path), "--subspace", "TG1")
        assert r.output == "case: EvenTangent\n"

    def test_classify_not_invariant(self, runner):
        r = invoke(runner, "classify", "--example", "g6", "--subspace", "span(Y3)")
        assert r.exit_code == 1

    def test_curvature(self, runner):
        r = invoke(runner, "curvature", "--example", "g6", "--subspace", "TG1")
        assert "minimal: True" in r.output and "totally geodesic: False" in r.output

    def test_curvature_not_involutive(self, runner):
        r = invoke(runner, "curvature", "--example", "g6", "--subspace", "span(Y3, Y5)")
        assert r.exit_code == 1
