from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from planedom.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "argv,golden",
    [
        (["gamma", "--q", "3"], "gamma_q3.json"),
        (["construct", "--family", "i", "--q", "5"], "construct_i_q5.jsonl"),
        (["scan", "--qmin", "21", "--qmax", "130"], "scan_21_130.jsonl"),
        (["min-blocking", "--q", "4", "--nontrivial"], "min_blocking_q4_nontrivial.json"),
    ],
)
def test_golden_outputs(argv, golden, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out == (GOLDEN / golden).read_text(encoding="utf-8")


def test_construct_then_analyze_pipeline(tmp_path, capsys):
    cand = tmp_path / "set.json"
    code, out, _ = run(["construct", "--family", "baer-union", "--q", "9", "--out", str(cand)], capsys)
    assert code == 0 and json.loads(out)["expected_size"] == 26
    plane = tmp_path / "plane.json"
    assert run(["build", "--q", "9", "--out", str(plane)], capsys)[0] == 0
    code, out, _ = run(["analyze", "--plane", str(plane), "--set", str(cand)], capsys)
    assert code == 0
    assert out == (GOLDEN / "analyze_baer_union_q9.json").read_text(encoding="utf-8")
    report = json.loads(out)
    assert report["flags"]["dominating"] and not report["flags"]["primal"] and report["size"] == 26


@pytest.mark.parametrize("family", ["i", "ii", "iii", "blocking-pencil", "baer-union", "oval-skew", "nonstable", "pg3qm2"])
def test_construct_round_trip_reproduces_flags(family, tmp_path, capsys):
    q = 9 if family in ("iii", "blocking-pencil", "baer-union") else 5
    cand = tmp_path / "c.json"
    code, out, _ = run(["construct", "--family", family, "--q", str(q), "--out", str(cand)], capsys)
    meta = json.loads(out)
    code, out, _ = run(["analyze", "--q", str(q), "--set", str(cand)], capsys)
    report = json.loads(out)
    assert report["size"] == meta["expected_size"] == meta["size"]
    assert {k: report["flags"][k] for k in meta["expected_flags"]} == meta["expected_flags"]


def test_scan_has_no_large_beta0(capsys):
    code, out, _ = run(["scan", "--qmin", "30", "--qmax", "130"], capsys)
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and rows and all(r["beta0"] in (0, 1) for r in rows)


def test_exit_codes(tmp_path, capsys):
    code, _, err = run(["gamma"], capsys)
    assert code == 1 and json.loads(err)["error"] == "UsageError"
    code, _, err = run(["scan", "--qmin", "2", "--qmax", "5"], capsys)
    assert code == 1
    code, _, err = run(["gamma", "--q", "6"], capsys)
    assert code == 2 and json.loads(err)["error"] == "Unsupported"
    code, _, err = run(["construct", "--family", "iii", "--q", "5"], capsys)
    assert code == 2 and json.loads(err)["error"] == "NotApplicable"
    code, _, err = run(["enumerate-minimal", "--q", "5", "--max-size", "10"], capsys)
    assert code == 2 and json.loads(err)["error"] == "TooLarge"
    code, out, err = run(["gamma", "--q", "5", "--budget-seconds", "0"], capsys)
    assert code == 3
    assert json.loads(out)["lower"] == json.loads(out)["upper"] == 10
    assert json.loads(err)["error"] == "BudgetExhausted"
    code, _, err = run(["analyze", "--q", "3", "--set", str(tmp_path / "missing.json")], capsys)
    assert code == 2 and json.loads(err)["error"] == "ParseError"


def test_validate_reports_broken_plane(tmp_path, capsys):
    doc = json.loads(subprocess.check_output([sys.executable, "-m", "planedom", "build", "--q", "2"]))
    doc["lines"][0] = [0, 1, 3]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(["validate", "--plane", str(path)], capsys)
    assert code == 2 and not json.loads(out)["valid"]
    code, _, err = run(["gamma", "--plane", str(path)], capsys)
    assert code == 2 and json.loads(err)["error"] == "InvalidPlane"


def test_enumerate_minimal(capsys):
    code, out, _ = run(["enumerate-minimal", "--q", "3", "--max-size", "6"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 52
    assert {s["classification"] for s in doc["sets"]} == {"case_i"}


def test_output_is_deterministic():
    cmd = [sys.executable, "-m", "planedom", "gamma", "--q", "4"]
    assert subprocess.check_output(cmd) == subprocess.check_output(cmd, env={"PLANEDOM_THREADS": "1", "PATH": ""})
