"""Acceptance checks, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line to the real
stdout, so the summary survives pytest's output capture.  Running this file
directly (``python3 tests/test_acceptance.py``) prints the same lines.
"""

from __future__ import annotations

import json
import math
import random
import sys
import time

import numpy as np
import pytest

from planedom import feasibility, solver
from planedom.cli import main as cli_main
from planedom.constructions import FAMILIES, pg_3q_minus_2
from planedom.plane import dual
from planedom.sets import (
    Candidate,
    analyze,
    blocked_lines,
    bound_blocked_lines,
    bound_lbweird,
    common_line,
    is_blocking,
    is_covering,
    is_dominating,
    line_hits,
    line_weights,
    secant_spectrum,
    weight,
)

from conftest import pg

SEED = 20240601


def _report(n: str, ok: bool, detail: str) -> None:
    sys.__stdout__.write(f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'} {detail}\n")
    sys.__stdout__.flush()


def _check(n: str, failures: list[str], detail: str) -> None:
    _report(n, not failures, detail if not failures else "; ".join(failures[:5]))
    assert not failures, failures


def _cli_json(argv, capsys) -> tuple[int, dict]:
    code = cli_main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out.splitlines()[0])


def test_1_domination_number(capsys):
    failures = []
    start = time.perf_counter()
    for q in (2, 3, 4):
        code, doc = _cli_json(["gamma", "--q", str(q)], capsys)
        if code != 0 or doc["optimum"] != 2 * q or doc["proof"] != "exhausted":
            failures.append(f"q={q}: exit {code}, {doc}")
    small = time.perf_counter() - start
    if small >= 60:
        failures.append(f"q<=4 took {small:.1f}s")
    code, doc = _cli_json(["gamma", "--q", "5", "--budget-seconds", "600"], capsys)
    if code == 0:
        if doc["optimum"] != 10:
            failures.append(f"q=5 optimum {doc['optimum']}")
    elif code != 3 or (doc["lower"], doc["upper"]) != (10, 10):
        failures.append(f"q=5: exit {code}, {doc}")
    _check("1", failures, f"gamma = 2q for q=2,3,4 in {small:.2f}s; q=5 -> {doc.get('optimum', doc)}")


def test_2_classification_at_equality(capsys):
    start = time.perf_counter()
    code, doc = _cli_json(["enumerate-minimal", "--q", "3", "--max-size", "6"], capsys)
    plane = pg(3)
    failures = []
    if code != 0 or doc["count"] == 0:
        failures.append(f"exit {code}, count {doc.get('count')}")
    for s in doc["sets"]:
        d = Candidate(s["points"], s["lines"])
        ln = common_line(plane, d.points)
        # q collinear points on l, q concurrent lines through P, P on l, P and l not in D
        pts_ok = len(d.points) == 3 and ln is not None and ln not in d.lines
        centre = set.intersection(*(set(plane.lines[m].tolist()) for m in d.lines)) if d.lines else set()
        lines_ok = len(d.lines) == 3 and len(centre) == 1
        p = next(iter(centre)) if lines_ok else None
        if not (pts_ok and lines_ok and plane.on(p, ln) and p not in d.points and s["classification"] == "case_i"):
            failures.append(f"set {s} is not of the collinear-plus-concurrent shape")
    elapsed = time.perf_counter() - start
    if elapsed >= 120:
        failures.append(f"took {elapsed:.1f}s")
    _check("2", failures, f"{doc['count']} minimum minimal dominating sets at q=3, all case_i, {elapsed:.2f}s")


def test_3_smallest_nontrivial_blocking_set(capsys):
    code, doc = _cli_json(["min-blocking", "--q", "4", "--nontrivial"], capsys)
    plane = pg(4)
    failures = []
    if code != 0 or doc["optimum"] != 7:
        failures.append(f"exit {code}, optimum {doc.get('optimum')}")
    else:
        spec = secant_spectrum(plane, doc["witness"]["points"]).histogram
        if spec != {1: 14, 3: 7}:
            failures.append(f"spectrum {spec}")
    _check("3", failures, "q=4 nontrivial minimum is 7 with spectrum {1:14, 3:7}")


ACCEPTANCE_FAMILIES = ("i", "ii", "iii", "blocking-pencil", "baer-union", "oval-skew", "nonstable", "pg3qm2")


def _expected_size(name: str, q: int) -> int:
    r = math.isqrt(q)
    return {
        "i": 2 * q,
        "ii": 2 * q + 2,
        "iii": 2 * q + r + 1,
        "blocking-pencil": 2 * q + r + 2,
        "baer-union": 2 * q + 2 * r + 2,
        "oval-skew": q + 1 + q * (q - 1) // 2 + (q % 2 == 0),
        "nonstable": 3 * q - 1,
        "pg3qm2": 3 * q - 2,
    }[name]


def test_4_construction_sizes_and_flags():
    failures = []
    checked = 0
    start = time.perf_counter()
    for name in ACCEPTANCE_FAMILIES:
        fam = FAMILIES[name]
        for q in fam.orders:
            plane = pg(q)
            cand = fam.build(plane, None)
            report = analyze(plane, cand)
            if cand.size != _expected_size(name, q):
                failures.append(f"{name} q={q}: size {cand.size}")
            for flag, want in fam.flags.items():
                if report.flags[flag] != want:
                    failures.append(f"{name} q={q}: {flag}={report.flags[flag]}")
            checked += 1
    elapsed = time.perf_counter() - start
    if elapsed >= 30:
        failures.append(f"took {elapsed:.1f}s")
    _check("4", failures, f"{checked} family/order pairs match sizes and flags in {elapsed:.2f}s")


def _random_sets(count: int, seed: int):
    rng = random.Random(seed)
    for _ in range(count):
        q = rng.choice((3, 4, 5))
        n = q * q + q + 1
        size = rng.randint(1, n)
        yield q, rng.sample(range(n), size)


def test_5_standard_equations():
    failures = []
    for q, pts in _random_sets(10_000, SEED):
        plane = pg(q)
        hits = line_hits(plane, pts).astype(np.int64)
        s = len(pts)
        if int(hits.sum()) != s * (q + 1) or int((hits * (hits - 1)).sum()) != s * (s - 1):
            failures.append(f"q={q} set {sorted(pts)}: standard equations fail")
        bound = bound_blocked_lines(s, q)
        actual = blocked_lines(plane, pts)
        collinear = s <= 2 or common_line(plane, pts) is not None
        if actual > bound or (actual == bound) != collinear:
            failures.append(f"q={q} |S|={s}: blocks {actual}, bound {bound}, collinear {collinear}")
    _check("5", failures, "10000 random point sets satisfy both identities and the kq+1 bound")


def test_6_weight_machinery():
    failures = []
    for q, pts in _random_sets(1_000, SEED + 1):
        plane = pg(q)
        k = int(line_hits(plane, pts).max())
        lw = line_weights(plane, pts, k)  # raises if the per-line identity fails
        for ln in range(plane.nlines):
            rhs = int(lw.per_line[ln]) + sum(lw.at(ln, int(p)) for p in plane.lines[ln])
            if rhs != lw.total:
                failures.append(f"q={q} line {ln}: {rhs} != {lw.total}")
        if lw.total > 0:
            failures.append(f"q={q}: weight {lw.total} > 0 at k = k_max")
    families = 0
    for fam in FAMILIES.values():
        for q in fam.orders:
            plane = pg(q)
            d = fam.build(plane, None)
            if not d.points or not is_dominating(plane, d):
                continue
            k = int(line_hits(plane, d.points).max())
            w = weight(plane, d.points, k)
            lower = bound_lbweird(len(d.points), k, d.size, q)
            if w < lower:
                failures.append(f"{fam.name} q={q}: weight {w} < {lower}")
            families += 1
    _check("6", failures, f"1000 random sets pass the per-line identity; {families} family candidates meet the weight bound")


def test_7_feasibility_scan():
    start = time.perf_counter()
    records = feasibility.scan(21, 130)
    elapsed = time.perf_counter() - start
    parts = {"a": [], "b": [], "c": []}
    for r in records:
        if r.q >= 30 and r.beta0 >= 2:
            parts["a"].append(f"q={r.q} k={r.k} beta0={r.beta0}")
        if r.case_label is not None:
            ok = (r.case_label == "I.a" and 2 * r.b == r.k) or (r.case_label == "II.a" and r.b == r.k)
            if not ok:
                parts["b"].append(f"{r.case_label} q={r.q} k={r.k} b={r.b}")
            if r.b >= 2 and not feasibility.combinatorial_exclusion(r):
                parts["c"].append(f"{r.case_label} q={r.q} k={r.k} b={r.b} N'={r.N_prime} not excluded")
    if elapsed >= 120:
        parts["a"].append(f"scan took {elapsed:.1f}s")
    for key, bad in parts.items():
        _report(f"7({key})", not bad, "; ".join(bad) if bad else f"{len(records)} records")
    assert not any(parts.values()), parts


@pytest.mark.parametrize("q", [2, 3, 4])
def test_8_duality(q):
    plane = pg(q)
    dplane = dual(plane)
    failures = []
    g, gd = solver.min_dominating(plane).optimum, solver.min_dominating(dplane).optimum
    if g != gd:
        failures.append(f"gamma {g} vs dual {gd}")
    rng = random.Random(SEED + q)
    n = plane.npoints
    cands = [FAMILIES[name].build(plane, None) for name in ("i", "ii", "nonstable")]
    for _ in range(200):
        cands.append(Candidate(rng.sample(range(n), rng.randint(0, n)), rng.sample(range(n), rng.randint(0, n))))
    swap = {"blocking": "covering", "covering": "blocking"}
    for d in cands:
        a, b = analyze(plane, d), analyze(dplane, d.swapped())
        mirrored = {swap.get(k, k): v for k, v in b.flags.items()}
        if a.flags != mirrored or a.size != b.size or (a.k, a.c) != (b.c, b.k):
            failures.append(f"{d.to_dict()}: {a.flags} vs {b.flags}")
    _check(f"8(q={q})", failures, f"gamma {g} on both sides; {len(cands)} candidates mirror flag-for-flag")


@pytest.mark.parametrize("q", [5, 7])
def test_9_non_blocking_non_covering_3q_minus_2(q):
    start = time.perf_counter()
    plane = pg(q)
    failures = []
    for t in range(1, q):
        d = pg_3q_minus_2(plane, t)
        if d.size != 3 * q - 2 or not is_dominating(plane, d):
            failures.append(f"t={t}: size {d.size}")
        if is_blocking(plane, d.points) or is_covering(plane, d.lines):
            failures.append(f"t={t}: blocks or covers")
    elapsed = time.perf_counter() - start
    if elapsed >= 5:
        failures.append(f"took {elapsed:.1f}s")
    _check(f"9(q={q})", failures, f"every t in 1..{q - 1} gives a dominating set of size {3 * q - 2}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
