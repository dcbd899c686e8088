"""Exact searches on the incidence graph: domination number, minimal
dominating sets, minimum blocking sets and blocking-set completion.

All of them are cover problems solved by the branch-and-bound kernel in
:mod:`planedom._kernels`.  Optimisation splits the root into one task per
child and advances the tasks in lock-step rounds of a fixed node budget,
sharing the incumbent only between rounds.  That keeps node counts and
results independent of the number of worker threads.  The reported witness
is always the lexicographically least optimal set (vertex ids, lines offset
by n), found afterwards by a greedy sequence of feasibility searches.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from planedom import _kernels as K
from planedom import bitset
from planedom.errors import BadParameter, BudgetExhausted, InvalidPlane, TooLarge
from planedom.plane import Plane, validate_axioms
from planedom.sets import Candidate, bound_minqq, is_minimal

ROUND_NODES = 20_000
MAX_GAMMA_ORDER = 16


@dataclass(frozen=True)
class SearchResult:
    optimum: int
    witness: Candidate
    nodes_expanded: int
    proof: str  # "exhausted" or "bound_met"

    def to_dict(self) -> dict:
        return {
            "optimum": self.optimum,
            "witness": self.witness.to_dict(),
            "nodes_expanded": self.nodes_expanded,
            "proof": self.proof,
        }


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        env = os.environ.get("PLANEDOM_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, threads)


def _check_plane(plane: Plane) -> None:
    report = validate_axioms(plane)
    if not report.ok:
        first = report.violations[0]
        raise InvalidPlane(f"{len(report.violations)} axiom violations, first: {first.axiom} {first.witness}")


# ---------------------------------------------------------------------------
# generic driver


class _Cover:
    """A cover problem plus the initial partial choice of a search."""

    def __init__(self, problem: K.Problem, chosen=(), allowed=None, backend: str | None = None):
        self.problem = problem
        self.backend = backend or K.default_backend()
        n = problem.ncand
        self.chosen0 = bitset.mask(chosen, n) if len(chosen) else np.zeros(problem.wc, dtype=np.uint64)
        if allowed is None:
            allowed = range(n)
        self.allowed0 = bitset.mask(allowed, n) & ~self.chosen0
        self.size0 = len(chosen)
        self.covered0 = np.zeros(problem.wu, dtype=np.uint64)
        for c in chosen:
            self.covered0 |= problem.cov[c]

    def ids(self, row) -> list[int]:
        return bitset.indices(row, self.problem.ncand)

    def state(self, chosen, covered, allowed, best, depth_cap) -> K.SearchState:
        return K.SearchState(self.problem, max(depth_cap, 1), covered, chosen, allowed, best=best)

    def root_split(self, best: int) -> list[K.SearchState]:
        """One task per child of the root, in the kernel's own child order."""
        p = self.problem
        uncovered = p.full & ~self.covered0
        elems = bitset.indices(uncovered, p.nelem)
        if not elems:
            return [self.state(self.chosen0, self.covered0, self.allowed0, best, best)]
        counts = bitset.popcount(p.dom[elems] & self.allowed0)
        e = elems[int(np.argmin(counts))]
        tasks = []
        allowed = self.allowed0.copy()
        for c in bitset.indices(p.dom[e] & self.allowed0, p.ncand):
            cb = np.uint64(1) << np.uint64(c % 64)
            allowed[c // 64] &= ~cb
            chosen = self.chosen0.copy()
            chosen[c // 64] |= cb
            tasks.append(self.state(chosen, self.covered0 | p.cov[c], allowed.copy(), best, best))
        return tasks

    def optimize(self, best: int, deadline: float | None, threads: int) -> tuple[int, np.ndarray | None, int]:
        """Minimum cover size below ``best`` (or ``best`` itself if none), its set and node count.

        The root node is counted once; children are advanced in rounds.
        """
        tasks = self.root_split(best)
        nodes = 1
        found_set = None
        live = list(tasks)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            while live:
                if deadline is not None and time.monotonic() > deadline:
                    raise _Timeout(best, found_set, nodes + sum(int(t.nodes[0]) for t in tasks))
                list(pool.map(lambda st: K.run(self.problem, st, K.MODE_OPTIMIZE, 0, ROUND_NODES, self.backend), live))
                for st in live:
                    if st.best[0] < best:
                        best = int(st.best[0])
                        found_set = st.best_set.copy()
                for st in tasks:
                    st.best[0] = min(int(st.best[0]), best)
                live = [st for st in live if not st.finished]
        return best, found_set, nodes + sum(int(t.nodes[0]) for t in tasks)

    def exists(self, extra: list[int], after: int, limit: int, deadline: float | None) -> tuple[bool, int]:
        """Is there a cover of size <= limit containing chosen0 + extra, other picks > after?"""
        p = self.problem
        chosen = self.chosen0.copy()
        covered = self.covered0.copy()
        for c in extra:
            chosen[c // 64] |= np.uint64(1) << np.uint64(c % 64)
            covered |= p.cov[c]
        later = bitset.mask(range(after + 1, p.ncand), p.ncand) if after + 1 < p.ncand else np.zeros(p.wc, np.uint64)
        st = self.state(chosen, covered, self.allowed0 & later, K.INF, limit - self.size0 - len(extra) + 1)
        while True:
            if deadline is not None and time.monotonic() > deadline:
                raise _Timeout(limit, None, int(st.nodes[0]))
            status = K.run(p, st, K.MODE_FIRST, limit, ROUND_NODES, self.backend)
            if status == K.FOUND:
                return True, int(st.nodes[0])
            if status == K.FINISHED:
                return False, int(st.nodes[0])

    def least_witness(self, size: int, deadline: float | None) -> tuple[list[int], int]:
        """Lexicographically least cover of exactly ``size`` candidates (in addition to chosen0)."""
        picked: list[int] = []
        nodes = 0
        allowed = self.ids(self.allowed0)
        for v in allowed:
            if self.size0 + len(picked) == size:
                break
            ok, spent = self.exists(picked + [v], v, size, deadline)
            nodes += spent
            if ok:
                picked.append(v)
        return picked, nodes


class _Timeout(Exception):
    def __init__(self, upper, found, nodes):
        self.upper, self.found, self.nodes = upper, found, nodes


def _deadline(budget_seconds: float | None) -> float | None:
    return None if budget_seconds is None else time.monotonic() + budget_seconds


# ---------------------------------------------------------------------------
# domination


def domination_problem(plane: Plane) -> K.Problem:
    """Closed neighbourhoods as covers; points and lines form the two bound groups."""
    adj = plane.closed_neighborhoods
    size = len(adj)
    n = plane.npoints
    groups = np.vstack([bitset.mask(range(n), size), bitset.mask(range(n, size), size)])
    return K.Problem(bitset.pack(adj), size, size, groups=groups)


def _family_i_witness(plane: Plane) -> Candidate:
    from planedom.constructions import family_i

    return family_i(plane, 0, int(plane.lines[0][0]))


def min_dominating(
    plane: Plane,
    budget_seconds: float | None = None,
    threads: int | None = None,
    use_analytic_bound: bool = False,
    backend: str | None = None,
) -> SearchResult:
    """Domination number with the lexicographically least minimum dominating set.

    The search starts from the size-2q incumbent and proves that nothing
    smaller exists.  With ``use_analytic_bound`` the proof is replaced by
    the counting bound |D| >= 2q when the incumbent already meets it.
    """
    _check_plane(plane)
    q, n = plane.order, plane.npoints
    if q > MAX_GAMMA_ORDER:
        raise TooLarge(f"domination search is limited to order <= {MAX_GAMMA_ORDER}, got {q}")
    deadline = _deadline(budget_seconds)
    incumbent = _family_i_witness(plane)
    analytic = bound_minqq(plane, incumbent).gamma_lower
    cover = _Cover(domination_problem(plane), backend=backend)
    if use_analytic_bound and incumbent.size <= analytic:
        return SearchResult(incumbent.size, incumbent, 0, "bound_met")
    try:
        best, found, nodes = cover.optimize(incumbent.size, deadline, thread_count(threads))
        if found is not None:
            incumbent = Candidate.from_vertices(cover.ids(found), n)
        picked, extra = cover.least_witness(best, deadline)
    except _Timeout as stop:
        upper = stop.upper
        witness = Candidate.from_vertices(cover.ids(stop.found), n) if stop.found is not None else incumbent
        raise BudgetExhausted(
            f"time budget of {budget_seconds}s exhausted", lower=analytic, upper=upper, witness=witness
        ) from None
    return SearchResult(best, Candidate.from_vertices(picked, n), nodes + extra, "exhausted")


def enumerate_minimal_dominating(plane: Plane, max_size: int, backend: str | None = None) -> list[Candidate]:
    """Every minimal dominating set with at most ``max_size`` vertices, sorted."""
    _check_plane(plane)
    q = plane.order
    if not (q <= 3 or (q == 4 and max_size <= 2 * q + 2)):
        raise TooLarge(f"enumeration refused for q={q}, max_size={max_size} (allowed: q <= 3, or q = 4 with max_size <= 10)")
    if max_size < 0:
        raise BadParameter("max_size must be nonnegative")
    cover = _Cover(domination_problem(plane), backend=backend)
    st = cover.state(cover.chosen0, cover.covered0, cover.allowed0, K.INF, max_size)
    while K.run(cover.problem, st, K.MODE_ENUMERATE, max_size, 1 << 40, cover.backend) != K.FINISHED:
        pass
    n = plane.npoints
    found = {tuple(cover.ids(row)) for row in st.solutions[: int(st.nsol[0])]}
    out = [Candidate.from_vertices(v, n) for v in sorted(found)]
    return [c for c in out if is_minimal(plane, c)]


# ---------------------------------------------------------------------------
# blocking sets


def blocking_problem(plane: Plane, nontrivial: bool = False, lines=None) -> K.Problem:
    """Points cover the lines through them; optionally forbid full lines."""
    full = None if lines is None else bitset.mask(lines, plane.nlines)
    forbid = plane.line_bits if nontrivial else None
    return K.Problem(plane.point_bits, plane.npoints, plane.nlines, full=full, forbid=forbid)


def min_blocking(
    plane: Plane, nontrivial: bool = False, budget_seconds: float | None = None, backend: str | None = None
) -> SearchResult | None:
    """Smallest blocking set (containing no full line if ``nontrivial``), or None if none exists."""
    _check_plane(plane)
    deadline = _deadline(budget_seconds)
    cover = _Cover(blocking_problem(plane, nontrivial), backend=backend)
    start = plane.npoints + 1 if nontrivial else plane.order + 2
    try:
        best, _, nodes = cover.optimize(start, deadline, thread_count(None))
        if best >= start:
            return None
        picked, extra = cover.least_witness(best, deadline)
    except _Timeout as stop:
        raise BudgetExhausted(f"time budget of {budget_seconds}s exhausted", lower=0, upper=stop.upper) from None
    return SearchResult(best, Candidate(picked, ()), nodes + extra, "exhausted")


def extend_to_blocking(plane: Plane, points, t: int, backend: str | None = None) -> list[int] | None:
    """Fewest extra points (at most ``t``) turning ``points`` into a blocking set."""
    if not 0 <= t <= 4:
        raise BadParameter(f"t must satisfy 0 <= t <= 4, got {t}")
    points = set(points)
    hits = np.zeros(plane.nlines, dtype=np.int64)
    for p in points:
        hits[plane.pencils[p]] += 1
    skew = np.flatnonzero(hits == 0).tolist()
    if not skew:
        return []
    outside = sorted(set(range(plane.npoints)) - points)
    cover = _Cover(blocking_problem(plane, lines=skew), allowed=outside, backend=backend)
    best, _, _ = cover.optimize(t + 1, None, 1)
    if best > t:
        return None
    picked, _ = cover.least_witness(best, None)
    return picked
