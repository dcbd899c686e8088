"""Resumable bitset branch-and-bound for minimum hitting/cover problems.

One kernel serves every exact search in the package: a universe of elements
(bit rows of ``Wu`` words) must be covered by choosing candidates (bit rows of
``Wc`` words).  Domination, blocking sets and blocking-set completion are all
instances.  The search branches on the uncovered element with the fewest
allowed candidates, tries those candidates in ascending id, and removes each
tried candidate from the allowed set of its later siblings, so every cover is
reached by exactly one path.

Two interchangeable backends run the same search step for step:

* ``numba``: scalar loops compiled with ``@njit``;
* ``numpy``: a Python driver whose per-node work is vectorised numpy.

``PLANEDOM_BACKEND=numpy`` selects the fallback; the default is numba when it
imports.  Both produce identical node counts, incumbents and solution lists.

The DFS stack lives in :class:`SearchState` arrays, so a call can stop after a
node budget and be resumed later.  That is how time budgets, growing solution
buffers and lock-step parallel workers are implemented.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly by the import
    import numba
except ImportError:  # pragma: no cover
    numba = None

MODE_OPTIMIZE = 0
MODE_ENUMERATE = 1
MODE_FIRST = 2

FINISHED = 0
BUDGET = 1
BUFFER_FULL = 2
FOUND = 3

INF = 1 << 30


def default_backend() -> str:
    wanted = os.environ.get("PLANEDOM_BACKEND", "numba").strip().lower()
    if wanted not in ("numba", "numpy"):
        raise ValueError(f"PLANEDOM_BACKEND must be 'numba' or 'numpy', got {wanted!r}")
    if wanted == "numba" and numba is None:
        return "numpy"
    return wanted


class Problem:
    """Immutable cover instance: coverage rows, their transpose, side constraints."""

    def __init__(self, cov, ncand, nelem, full=None, groups=None, forbid=None):
        self.cov = np.ascontiguousarray(cov, dtype=np.uint64)
        self.ncand = ncand
        self.nelem = nelem
        wu = self.cov.shape[1]
        wc = max(1, -(-ncand // 64))
        dense = np.unpackbits(self.cov.view(np.uint8).reshape(ncand, -1), axis=1, bitorder="little")[:, :nelem]
        padded = np.zeros((nelem, wc * 64), dtype=bool)
        padded[:, :ncand] = dense.T
        self.dom = np.ascontiguousarray(np.packbits(padded, axis=1, bitorder="little").view("<u8").astype(np.uint64))
        if full is None:
            full = np.zeros(wu, dtype=np.uint64)
            for e in range(nelem):
                full[e // 64] |= np.uint64(1) << np.uint64(e % 64)
        self.full = np.ascontiguousarray(full, dtype=np.uint64)
        if groups is None:
            groups = np.zeros((0, wu), dtype=np.uint64)
        self.groups = np.ascontiguousarray(groups, dtype=np.uint64)
        if forbid is None:
            forbid = np.zeros((0, wc), dtype=np.uint64)
        self.forbid = np.ascontiguousarray(forbid, dtype=np.uint64)
        self.gmax = int(np.bitwise_count(self.cov).sum(axis=1).max()) if ncand else 0

    @property
    def wu(self) -> int:
        return self.cov.shape[1]

    @property
    def wc(self) -> int:
        return self.dom.shape[1]


class SearchState:
    """DFS stack plus incumbent/solution buffers; mutated in place by the kernels."""

    def __init__(self, problem: Problem, max_depth: int, covered, chosen, allowed, best=INF, capacity=64):
        d1 = max_depth + 2
        self.covered = np.zeros((d1, problem.wu), dtype=np.uint64)
        self.chosen = np.zeros((d1, problem.wc), dtype=np.uint64)
        self.allowed = np.zeros((d1, problem.wc), dtype=np.uint64)
        self.size = np.zeros(d1, dtype=np.int64)
        self.branch = np.full(d1, -1, dtype=np.int64)
        self.covered[0] = covered
        self.chosen[0] = chosen
        self.allowed[0] = allowed & ~np.asarray(chosen, dtype=np.uint64)
        self.size[0] = int(np.bitwise_count(np.asarray(chosen, dtype=np.uint64)).sum())
        self.depth = np.zeros(1, dtype=np.int64)
        self.nodes = np.zeros(1, dtype=np.int64)
        self.best = np.array([best], dtype=np.int64)
        self.best_set = np.zeros(problem.wc, dtype=np.uint64)
        self.solutions = np.zeros((capacity, problem.wc), dtype=np.uint64)
        self.nsol = np.zeros(1, dtype=np.int64)
        self.finished = False

    def grow(self) -> None:
        bigger = np.zeros((2 * len(self.solutions), self.solutions.shape[1]), dtype=np.uint64)
        bigger[: len(self.solutions)] = self.solutions
        self.solutions = bigger

    def args(self):
        return (
            self.covered,
            self.chosen,
            self.allowed,
            self.size,
            self.branch,
            self.depth,
            self.nodes,
            self.best,
            self.best_set,
            self.solutions,
            self.nsol,
        )


# ---------------------------------------------------------------------------
# scalar kernel (compiled by numba)


def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


def _lowest_bit(x):
    """Index of the lowest set bit of a nonzero word."""
    return _popcount((x & (~x + np.uint64(1))) - np.uint64(1))


def _group_bound(cov, allowed, uncovered, gmask, hist, gmax):
    """Fewest candidates whose largest gains on ``uncovered & gmask`` can sum to its size."""
    wu = uncovered.shape[0]
    need = 0
    for w in range(wu):
        need += _popcount(uncovered[w] & gmask[w])
    if need == 0:
        return 0
    for g in range(gmax + 1):
        hist[g] = 0
    ncand = cov.shape[0]
    for c in range(ncand):
        if (allowed[c >> 6] >> np.uint64(c & 63)) & np.uint64(1):
            gain = 0
            for w in range(wu):
                gain += _popcount(cov[c, w] & uncovered[w] & gmask[w])
            hist[gain] += 1
    total = 0
    k = 0
    for g in range(gmax, 0, -1):
        cnt = hist[g]
        if cnt == 0:
            continue
        if total + cnt * g >= need:
            return k + (need - total + g - 1) // g
        total += cnt * g
        k += cnt
    return INF


def _dfs_scalar(
    cov, dom, full, groups, forbid, gmax, mode, limit, budget,
    covered, chosen, allowed, size, branch, depth, nodes, best, best_set, solutions, nsol,
):
    wu = cov.shape[1]
    wc = dom.shape[1]
    nelem = dom.shape[0]
    uncovered = np.zeros(wu, dtype=np.uint64)
    hist = np.zeros(gmax + 1, dtype=np.int64)
    d = depth[0]
    spent = 0
    while True:
        if d < 0:
            depth[0] = d
            return FINISHED
        if branch[d] == -1:
            if spent >= budget:
                depth[0] = d
                return BUDGET
            spent += 1
            nodes[0] += 1
            # side constraint: no forbidden pattern fully chosen
            bad = False
            for f in range(forbid.shape[0]):
                inside = True
                for w in range(wc):
                    if (chosen[d, w] & forbid[f, w]) != forbid[f, w]:
                        inside = False
                        break
                if inside:
                    bad = True
                    break
            if bad:
                d -= 1
                continue
            done = True
            for w in range(wu):
                uncovered[w] = full[w] & ~covered[d, w]
                if uncovered[w] != 0:
                    done = False
            lim = best[0] - 1 if mode == MODE_OPTIMIZE else limit
            if done:
                if size[d] <= lim:
                    if mode == MODE_OPTIMIZE:
                        best[0] = size[d]
                        for w in range(wc):
                            best_set[w] = chosen[d, w]
                    else:
                        if nsol[0] >= solutions.shape[0]:
                            nodes[0] -= 1
                            depth[0] = d
                            return BUFFER_FULL
                        for w in range(wc):
                            solutions[nsol[0], w] = chosen[d, w]
                        nsol[0] += 1
                        if mode == MODE_FIRST:
                            depth[0] = d - 1
                            return FOUND
                d -= 1
                continue
            if size[d] + 1 > lim:
                d -= 1
                continue
            lb = _group_bound(cov, allowed[d], uncovered, full, hist, gmax)
            for g in range(groups.shape[0]):
                lbg = _group_bound(cov, allowed[d], uncovered, groups[g], hist, gmax)
                if lbg > lb:
                    lb = lbg
            if size[d] + lb > lim:
                d -= 1
                continue
            # most constrained uncovered element, smallest id on ties
            best_e = -1
            best_cnt = INF
            for w in range(wu):
                word = uncovered[w]
                while word != 0:
                    e = w * 64 + _lowest_bit(word)
                    word &= word - np.uint64(1)
                    if e >= nelem:
                        continue
                    cnt = 0
                    for v in range(wc):
                        cnt += _popcount(dom[e, v] & allowed[d, v])
                    if cnt < best_cnt:
                        best_cnt = cnt
                        best_e = e
            if best_cnt == 0:
                d -= 1
                continue
            branch[d] = best_e
        # next child of the node at depth d
        e = branch[d]
        c = -1
        for v in range(wc):
            word = dom[e, v] & allowed[d, v]
            if word != 0:
                c = v * 64 + _lowest_bit(word)
                break
        if c < 0:
            branch[d] = -1
            d -= 1
            continue
        cw = c >> 6
        cb = np.uint64(1) << np.uint64(c & 63)
        allowed[d, cw] &= ~cb
        for w in range(wu):
            covered[d + 1, w] = covered[d, w] | cov[c, w]
        for v in range(wc):
            chosen[d + 1, v] = chosen[d, v]
            allowed[d + 1, v] = allowed[d, v]
        chosen[d + 1, cw] |= cb
        size[d + 1] = size[d] + 1
        branch[d + 1] = -1
        d += 1


# ---------------------------------------------------------------------------
# vectorised fallback


def _bound_numpy(gains, need):
    if need == 0:
        return 0
    order = np.sort(gains)[::-1]
    csum = np.cumsum(order)
    if len(csum) == 0 or csum[-1] < need:
        return INF
    k = int(np.searchsorted(csum, need))
    prev = int(csum[k - 1]) if k else 0
    # finish with a fractional share of the (k+1)-th gain, as the scalar kernel does
    g = int(order[k])
    return k + (need - prev + g - 1) // g


def _dfs_numpy(
    cov, dom, full, groups, forbid, gmax, mode, limit, budget,
    covered, chosen, allowed, size, branch, depth, nodes, best, best_set, solutions, nsol,
):
    ncand = cov.shape[0]
    nelem = dom.shape[0]
    cand_word = np.arange(ncand) >> 6
    cand_bit = np.left_shift(np.uint64(1), (np.arange(ncand) & 63).astype(np.uint64))
    elem_ids = np.arange(nelem)
    elem_word = elem_ids >> 6
    elem_bit = np.left_shift(np.uint64(1), (elem_ids & 63).astype(np.uint64))
    masks = np.vstack([full[None, :], groups])
    d = int(depth[0])
    spent = 0
    while True:
        if d < 0:
            depth[0] = d
            return FINISHED
        if branch[d] == -1:
            if spent >= budget:
                depth[0] = d
                return BUDGET
            spent += 1
            nodes[0] += 1
            if len(forbid) and np.any(np.all((chosen[d] & forbid) == forbid, axis=1)):
                d -= 1
                continue
            uncovered = full & ~covered[d]
            lim = best[0] - 1 if mode == MODE_OPTIMIZE else limit
            if not uncovered.any():
                if size[d] <= lim:
                    if mode == MODE_OPTIMIZE:
                        best[0] = size[d]
                        best_set[:] = chosen[d]
                    else:
                        if nsol[0] >= solutions.shape[0]:
                            nodes[0] -= 1
                            depth[0] = d
                            return BUFFER_FULL
                        solutions[nsol[0]] = chosen[d]
                        nsol[0] += 1
                        if mode == MODE_FIRST:
                            depth[0] = d - 1
                            return FOUND
                d -= 1
                continue
            if size[d] + 1 > lim:
                d -= 1
                continue
            live = (allowed[d][cand_word] & cand_bit) != 0
            live_cov = cov[live]
            lb = 0
            for m in masks:
                target = uncovered & m
                gains = np.bitwise_count(live_cov & target).sum(axis=1, dtype=np.int64)
                lb = max(lb, _bound_numpy(gains, int(np.bitwise_count(target).sum())))
            if size[d] + lb > lim:
                d -= 1
                continue
            open_elems = elem_ids[(uncovered[elem_word] & elem_bit) != 0]
            counts = np.bitwise_count(dom[open_elems] & allowed[d]).sum(axis=1, dtype=np.int64)
            i = int(np.argmin(counts))
            if counts[i] == 0:
                d -= 1
                continue
            branch[d] = open_elems[i]
        e = branch[d]
        options = dom[e] & allowed[d]
        nz = np.flatnonzero(options)
        if len(nz) == 0:
            branch[d] = -1
            d -= 1
            continue
        w = int(nz[0])
        word = int(options[w])
        c = w * 64 + ((word & -word).bit_length() - 1)
        cb = np.uint64(1) << np.uint64(c & 63)
        allowed[d, c >> 6] &= ~cb
        covered[d + 1] = covered[d] | cov[c]
        chosen[d + 1] = chosen[d]
        allowed[d + 1] = allowed[d]
        chosen[d + 1, c >> 6] |= cb
        size[d + 1] = size[d] + 1
        branch[d + 1] = -1
        d += 1


if numba is not None:
    _popcount = numba.njit(inline="always", cache=True)(_popcount)
    _lowest_bit = numba.njit(inline="always", cache=True)(_lowest_bit)
    _group_bound = numba.njit(cache=True, nogil=True)(_group_bound)
    _dfs_numba = numba.njit(cache=True, nogil=True)(_dfs_scalar)
else:  # pragma: no cover
    _dfs_numba = None


def run(problem: Problem, state: SearchState, mode: int, limit: int, budget: int, backend: str | None = None) -> int:
    """Advance ``state`` by at most ``budget`` node evaluations."""
    backend = backend or default_backend()
    kernel = _dfs_numba if backend == "numba" else _dfs_numpy
    if kernel is None:  # pragma: no cover
        raise RuntimeError("numba backend requested but numba is not installed")
    while True:
        status = kernel(
            problem.cov, problem.dom, problem.full, problem.groups, problem.forbid, problem.gmax,
            mode, limit, budget, *state.args(),
        )
        if status == BUFFER_FULL:
            state.grow()
            continue
        if status == FINISHED:
            state.finished = True
        return int(status)
