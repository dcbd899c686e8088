from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
from conftest import hall, pg
from oracles import brute_pg2, gamma as oracle_gamma, min_blocking as oracle_min_blocking
from oracles import minimal_dominating_sets, neighbourhood_masks

from planedom.constructions import baer_subplane, family_iii, pg_3q_minus_2
from planedom.errors import BadParameter, BudgetExhausted, InvalidPlane, TooLarge
from planedom.plane import dual, from_incidence
from planedom.sets import bound_minqq, classify, is_baer_subplane, is_blocking, is_dominating, secant_spectrum
from planedom.solver import enumerate_minimal_dominating, extend_to_blocking, min_blocking, min_dominating


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_gamma_is_2q(q):
    p = pg(q)
    res = min_dominating(p)
    assert res.optimum == 2 * q and res.proof == "exhausted"
    assert is_dominating(p, res.witness) and res.witness.size == 2 * q
    assert res.optimum >= bound_minqq(p, res.witness).gamma_lower


@pytest.mark.parametrize("q", [2, 3])
def test_gamma_matches_brute_force(q):
    assert min_dominating(pg(q)).optimum == oracle_gamma(brute_pg2(q))


def test_witness_is_lexicographically_least():
    lines = brute_pg2(2)
    masks = neighbourhood_masks(lines)
    full = (1 << 14) - 1
    optima = [s for s in combinations(range(14), 4) if _or(masks, s) == full]
    assert min_dominating(pg(2)).witness.vertices(7) == list(min(optima))


def _or(masks, s):
    acc = 0
    for v in s:
        acc |= masks[v]
    return acc


def test_witness_at_q4_is_case_i():
    p = pg(4)
    assert classify(p, min_dominating(p).witness) == "case_i"


@pytest.mark.parametrize("q", [2, 3, 4])
def test_gamma_of_dual(q):
    assert min_dominating(dual(pg(q))).optimum == min_dominating(pg(q)).optimum


def test_gamma_on_non_desarguesian_plane():
    assert min_dominating(hall()).optimum == 18


@pytest.mark.parametrize("backend", ["numba", "numpy"])
def test_results_identical_across_backends_and_threads(backend):
    ref = min_dominating(pg(4), backend="numba", threads=1)
    for threads in (1, 3):
        res = min_dominating(pg(4), backend=backend, threads=threads)
        assert res == ref


def test_budget_and_analytic_bound():
    p = pg(5)
    with pytest.raises(BudgetExhausted) as info:
        min_dominating(p, budget_seconds=0)
    assert (info.value.lower, info.value.upper) == (10, 10)
    assert is_dominating(p, info.value.witness)
    res = min_dominating(p, use_analytic_bound=True)
    assert res.optimum == 10 and res.proof == "bound_met"


def test_refusals():
    inc = pg(2).incidence.copy()
    inc[0, 0] = ~inc[0, 0]
    with pytest.raises(InvalidPlane):
        min_dominating(from_incidence(2, inc))
    with pytest.raises(TooLarge):
        min_dominating(pg(17))
    with pytest.raises(TooLarge):
        enumerate_minimal_dominating(pg(4), 11)
    with pytest.raises(TooLarge):
        enumerate_minimal_dominating(pg(5), 4)


@pytest.mark.parametrize("q,max_size", [(2, 14), (3, 6)])
def test_enumeration_matches_brute_force(q, max_size):
    p = pg(q)
    got = {tuple(c.vertices(p.n)) for c in enumerate_minimal_dominating(p, max_size)}
    assert got == minimal_dominating_sets(brute_pg2(q), max_size)


def test_enumeration_examples():
    p2 = pg(2)
    found = enumerate_minimal_dominating(p2, 4)
    assert found and all(c.size == 4 and classify(p2, c) == "case_i" for c in found)
    assert enumerate_minimal_dominating(p2, 3) == []
    p3 = pg(3)
    found3 = enumerate_minimal_dominating(p3, 6)
    assert len(found3) == 13 * 4  # one per flag (point on line)
    assert {classify(p3, c) for c in found3} == {"case_i"}


def test_enumeration_backends_agree():
    a = enumerate_minimal_dominating(pg(3), 7, backend="numba")
    b = enumerate_minimal_dominating(pg(3), 7, backend="numpy")
    assert a == b


def test_min_blocking():
    r3 = min_blocking(pg(3))
    assert r3.optimum == 4
    assert any(set(r3.witness.points) == set(ln.tolist()) for ln in pg(3).lines)
    assert min_blocking(pg(2), nontrivial=True) is None
    p4 = pg(4)
    r4 = min_blocking(p4, nontrivial=True)
    assert r4.optimum == 7 and is_baer_subplane(p4, r4.witness.points)
    assert secant_spectrum(p4, r4.witness.points).histogram == {1: 14, 3: 7}


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("nontrivial", [False, True])
def test_min_blocking_matches_brute_force(q, nontrivial):
    res = min_blocking(pg(q), nontrivial=nontrivial)
    expected = oracle_min_blocking(brute_pg2(q) if q != 4 else [frozenset(l.tolist()) for l in pg(4).lines], nontrivial)
    assert (res.optimum if res else None) == expected
    if res:
        assert is_blocking(pg(q), res.witness.points)


def test_min_blocking_backends_agree():
    assert min_blocking(pg(4), True, backend="numba") == min_blocking(pg(4), True, backend="numpy")


def test_extend_to_blocking():
    p9 = pg(9)
    baer = baer_subplane(p9)
    iii = family_iii(p9, baer, baer[0])
    assert extend_to_blocking(p9, iii.points, 1) == [baer[0]]
    p5 = pg(5)
    line = [int(x) for x in p5.lines[0]]
    assert extend_to_blocking(p5, line[2:], 1) is None
    ext = extend_to_blocking(p5, line[2:], 2)
    assert ext is not None and len(ext) == 2 and is_blocking(p5, set(line[2:]) | set(ext))
    assert extend_to_blocking(p5, line, 0) == []
    assert extend_to_blocking(p5, pg_3q_minus_2(p5, 2).points, 0) is None
    with pytest.raises(BadParameter):
        extend_to_blocking(p5, [], 5)


def test_extension_is_minimum():
    """Cross-check against plain enumeration of point subsets."""
    p4 = pg(4)
    rng = np.random.default_rng(3)
    for _ in range(30):
        s = set(rng.choice(21, size=rng.integers(2, 6), replace=False).tolist())
        got = extend_to_blocking(p4, s, 3)
        rest = [x for x in range(21) if x not in s]
        want = None
        for t in range(4):
            hit = next((c for c in combinations(rest, t) if is_blocking(p4, s | set(c))), None)
            if hit is not None:
                want = t
                break
        assert (None if got is None else len(got)) == want
