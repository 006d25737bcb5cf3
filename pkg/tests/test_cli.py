import json
import os
import shutil
import subprocess
import sys

import pytest

from qtroesch import cli
from qtroesch.errors import NilpotencyError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out else None, err


def test_homology_examples(capsys):
    code, obj, _ = run_json(capsys, "homology", "--ell", "3", "--d", "3", "--n", "1", "--field", "cyclotomic", "--model", "tensor")
    assert code == 0 and obj["classification"] == "coresolution"
    assert obj["homology"]["h0"] == [1, 1]
    assert obj["header"]["convention"]["cross"] == "hecke_gt" and obj["header"]["field"]["kind"] == "cyclotomic"
    assert obj["graded_dims"] == [[0, 1], [1, 1], [2, 2], [3, 2], [4, 2], [5, 1], [6, 1]]
    code, obj, _ = run_json(capsys, "homology", "--ell", "3", "--d", "4", "--n", "1")
    assert code == 0 and obj["classification"] == "acyclic"
    code, obj, _ = run_json(capsys, "homology", "--ell", "3", "--d", "6", "--n", "2")
    assert code == 0 and obj["homology"]["h0"] == [3, 3] and obj["expected_h0"] == 3


def test_homology_ranges_and_direct_model(capsys):
    code, obj, _ = run_json(capsys, "homology", "--d", "0-4", "--n", "1,2")
    assert code == 0 and len(obj["results"]) == 10
    assert [r["classification"] for r in obj["results"][:5]] == ["coresolution", "acyclic", "acyclic", "coresolution", "acyclic"]
    code, obj, _ = run_json(capsys, "homology", "--d", "3", "--n", "2", "--model", "direct")
    assert code == 0 and obj["homology"]["h0"] == [2, 2]


def test_homology_over_prime_field(capsys):
    code, obj, _ = run_json(capsys, "homology", "--d", "6", "--n", "2", "--field", "fp:7")
    assert code == 0 and obj["homology"]["h0"] == [3, 3]
    assert obj["header"]["field"] == {"kind": "prime", "ell": 3, "p": 7}


def test_homology_csv(capsys, tmp_path):
    path = tmp_path / "t.csv"
    code, _, _ = run(capsys, "homology", "--d", "3", "--csv", str(path))
    rows = path.read_text().splitlines()
    assert code == 0 and rows[0] == "d,n,i,s,dim" and "3,1,0,1,1" in rows


@pytest.mark.parametrize(
    "argv",
    [
        ("homology", "--ell", "4", "--d", "3"),
        ("homology", "--d", "3", "--field", "fp:5"),
        ("homology", "--d", "3", "--field", "gaussian"),
        ("homology", "--d", "x-y"),
        ("homology", "--d", "-3"),
        ("search", "--ell", "4", "--dmax", "3"),
        ("dims", "--target", "SE", "--d", "2", "--ell", "4"),
        ("dims", "--target", "divisible", "--d", "4"),
        ("verify", "relations", "--n", "5"),
        ("verify", "troesch", "--jobs", "0"),
        ("nonsense",),
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert err.strip()


def test_verify_suites_pass(capsys):
    for argv in (
        ("verify", "qcombinatorics"),
        ("verify", "relations", "--n", "2", "--dmax", "3"),
        ("verify", "troesch", "--dmax", "12", "--n", "1"),
        ("verify", "leibniz", "--n", "1", "--dmax", "6"),
        ("verify", "ladder", "--dmax", "7"),
        ("verify", "kunneth", "--dmax", "3"),
    ):
        code, obj, _ = run_json(capsys, *argv)
        assert code == 0 and obj["passed"], argv
        assert obj["checks"] and all(c["passed"] for c in obj["checks"])


def test_qcombinatorics_covers_three_five_seven(capsys):
    _, obj, _ = run_json(capsys, "verify", "qcombinatorics")
    names = " ".join(c["name"] for c in obj["checks"])
    assert all(f"qbinom({ell},k,q^2)" in names for ell in (3, 5, 7))


def test_perturbed_relations_exit_one_with_counterexample(capsys):
    code, obj, _ = run_json(capsys, "verify", "relations", "--n", "2", "--dmax", "3", "--perturb")
    assert code == 1 and not obj["passed"]
    failed = {c["name"]: c["detail"] for c in obj["checks"] if not c["passed"]}
    assert "dumbbell" in failed
    detail = failed["dumbbell"]
    assert detail["counterexample"] and detail["lhs"] != detail["rhs"]


def test_invariant_breach_exits_three(capsys, monkeypatch):
    import qtroesch.troesch as troesch

    def broken(*_):
        raise NilpotencyError("delta^3 != 0", 2)

    monkeypatch.setattr(troesch, "homology_tables", broken)
    code, out, err = run(capsys, "homology", "--d", "3")
    assert code == 3 and "degree 2" in err and out == ""


def test_dims_examples(capsys):
    _, obj, _ = run_json(capsys, "dims", "--target", "SE", "--d", "2", "--ell", "3")
    assert obj["dims"] == [[0, 1], [2, 1], [4, 2], [6, 1], [8, 1]]
    _, obj, _ = run_json(capsys, "dims", "--target", "B", "--d", "3", "--n", "1")
    assert [v for _, v in obj["dims"]] == [1, 1, 2, 2, 2, 1, 1]
    _, obj, _ = run_json(capsys, "dims", "--target", "SE", "--d", "0")
    assert obj["dims"] == [[0, 1]]
    _, obj, _ = run_json(capsys, "dims", "--target", "divisible", "--d", "6")
    assert obj["dims"] == [[0, 1], [3, 1], [6, 2], [9, 1], [12, 1]]


def test_dims_csv(capsys, tmp_path):
    path = tmp_path / "se.csv"
    run(capsys, "dims", "--target", "SE", "--d", "1", "--csv", str(path))
    assert path.read_text() == "degree,dim\n0,1\n2,1\n4,1\n"


def test_calibrate(capsys):
    code, obj, _ = run_json(capsys, "calibrate")
    assert code == 0
    assert obj["chosen"] == {"c1": 1, "c2": 1, "cross": "hecke_gt"}
    assert len(obj["passers"]) == 2


def test_search_anchor_and_stream(capsys, tmp_path):
    out = tmp_path / "s.json"
    code, _, _ = run(capsys, "search", "--ell", "3", "--dmax", "6", "--values", "0,2", "--out", str(out))
    obj = json.loads(out.read_text())
    assert code == 0 and not obj["incomplete"]
    assert {"ell": 3, "base": 2, "coeffs": [[0, 0, 0, 0], [0, 0, 2, 0]]} in [s["ansatz"] for s in obj["survivors"]]
    lines = (tmp_path / "s.jsonl").read_text().splitlines()
    assert len(lines) == obj["examined"] == 578


def test_search_budget_and_empty_survivors(capsys):
    code, obj, _ = run_json(capsys, "search", "--ell", "5", "--dmax", "3", "--budget", "20", "--values", "0")
    assert code == 0 and obj["incomplete"] and obj["examined"] == 20
    assert obj["survivors"] == []


def test_outputs_are_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "homology", "--d", "0-6", "--n", "2", "--out", str(a))
    run(capsys, "homology", "--d", "0-6", "--n", "2", "--out", str(b), "--jobs", "2")
    assert a.read_bytes() == b.read_bytes()


def test_cache_is_transparent(capsys, tmp_path, monkeypatch):
    cache = tmp_path / "cache"
    plain = tmp_path / "plain.json"
    run(capsys, "verify", "ladder", "--dmax", "5", "--out", str(plain))
    first, second = tmp_path / "1.json", tmp_path / "2.json"
    run(capsys, "verify", "ladder", "--dmax", "5", "--cache", str(cache), "--out", str(first))
    assert len(os.listdir(cache)) == 1
    run(capsys, "verify", "ladder", "--dmax", "5", "--cache", str(cache), "--out", str(second))
    assert plain.read_bytes() == first.read_bytes() == second.read_bytes()
    # a failing suite replays its exit code from the cache too
    monkeypatch.setenv(cli.CACHE_ENV, str(cache))
    assert cli.main(["verify", "relations", "--perturb"]) == 1
    assert cli.main(["verify", "relations", "--perturb"]) == 1
    capsys.readouterr()
    assert len(os.listdir(cache)) == 2


def test_parse_range():
    assert cli.parse_range("5") == [5]
    assert cli.parse_range("0-3") == [0, 1, 2, 3]
    assert cli.parse_range("6,0,3") == [0, 3, 6]
    for bad in ("", "a", "3-x"):
        with pytest.raises(cli.UsageError):
            cli.parse_range(bad)


def test_console_script():
    exe = shutil.which("qtroesch")
    cmd = [exe] if exe else [sys.executable, "-m", "qtroesch.cli"]
    proc = subprocess.run(cmd + ["dims", "--target", "B", "--d", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dims"] == [[0, 1], [1, 1], [2, 2], [3, 1], [4, 1]]
    proc = subprocess.run(cmd + ["search", "--ell", "4"], capture_output=True, text=True)
    assert proc.returncode == 2
