"""Predicates, spectra, weights and counting bounds for candidate sets.

A :class:`Candidate` is a pair (points, lines) living on one plane; as a
vertex set of the incidence graph it dominates when every line outside the
line part meets the point part and every point outside the point part lies
on a line of the line part.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from planedom.errors import (
    InvalidPlane,
    NotBlocking,
    NotDominating,
    NotEssential,
    NotMinimal,
    ParseError,
)
from planedom.plane import Plane, dual


@dataclass(frozen=True)
class Candidate:
    points: frozenset[int] = frozenset()
    lines: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "points", frozenset(int(p) for p in self.points))
        object.__setattr__(self, "lines", frozenset(int(l) for l in self.lines))

    @property
    def size(self) -> int:
        return len(self.points) + len(self.lines)

    def __len__(self) -> int:
        return self.size

    def swapped(self) -> Candidate:
        """The same ids with the roles of points and lines exchanged (for the dual plane)."""
        return Candidate(self.lines, self.points)

    def vertices(self, n: int) -> list[int]:
        return sorted(self.points) + sorted(n + l for l in self.lines)

    @classmethod
    def from_vertices(cls, ids: Iterable[int], n: int) -> Candidate:
        ids = list(ids)
        return cls([v for v in ids if v < n], [v - n for v in ids if v >= n])

    def check(self, plane: Plane) -> Candidate:
        for name, ids, bound in (("point", self.points, plane.npoints), ("line", self.lines, plane.nlines)):
            bad = [i for i in ids if not 0 <= i < bound]
            if bad:
                raise InvalidPlane(f"{name} ids {sorted(bad)} out of range [0, {bound})")
        return self

    def to_dict(self) -> dict:
        return {"points": sorted(self.points), "lines": sorted(self.lines)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, document: bytes | str) -> Candidate:
        try:
            doc = json.loads(document)
            pts, lns = doc.get("points", []), doc.get("lines", [])
        except (ValueError, AttributeError) as exc:
            raise ParseError(f"not a candidate document: {exc}") from None
        for name, ids in (("points", pts), ("lines", lns)):
            if not isinstance(ids, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in ids):
                raise ParseError(f"{name} must be a list of integers")
            if len(set(ids)) != len(ids):
                raise ParseError(f"duplicate ids in {name}")
        return cls(pts, lns)


def _as_candidate(obj) -> Candidate:
    return obj if isinstance(obj, Candidate) else Candidate(points=obj)


def _indicator(size: int, ids) -> np.ndarray:
    vec = np.zeros(size, dtype=bool)
    vec[list(ids)] = True
    return vec


def line_hits(plane: Plane, points) -> np.ndarray:
    """|line ∩ points| for every line."""
    return _indicator(plane.npoints, points)[plane.lines].sum(axis=1)


def point_hits(plane: Plane, lines) -> np.ndarray:
    """Number of the given lines through every point."""
    return _indicator(plane.nlines, lines)[plane.pencils].sum(axis=1)


# ---------------------------------------------------------------------------
# predicates


def is_blocking(plane: Plane, points) -> bool:
    return bool(np.all(line_hits(plane, points) > 0))


def is_covering(plane: Plane, lines) -> bool:
    return bool(np.all(point_hits(plane, lines) > 0))


def blocked_lines(plane: Plane, points) -> int:
    return int(np.count_nonzero(line_hits(plane, points)))


def covered_points(plane: Plane, lines) -> int:
    return int(np.count_nonzero(point_hits(plane, lines)))


def undominated(plane: Plane, d: Candidate) -> tuple[list[int], list[int]]:
    """Points and lines not dominated by ``d``."""
    lines_ok = (line_hits(plane, d.points) > 0) | _indicator(plane.nlines, d.lines)
    points_ok = (point_hits(plane, d.lines) > 0) | _indicator(plane.npoints, d.points)
    return np.flatnonzero(~points_ok).tolist(), np.flatnonzero(~lines_ok).tolist()


def is_dominating(plane: Plane, d: Candidate) -> bool:
    pts, lns = undominated(plane, d)
    return not pts and not lns


def _domination_counts(plane: Plane, d: Candidate) -> tuple[np.ndarray, np.ndarray]:
    adj = plane.closed_neighborhoods
    verts = np.array(d.vertices(plane.npoints), dtype=np.int64)
    return adj[:, verts].sum(axis=1), verts


def _require_dominating(plane: Plane, d: Candidate) -> None:
    if not is_dominating(plane, d):
        raise NotDominating("candidate is not a dominating set")


def is_minimal(plane: Plane, d: Candidate) -> bool:
    """No single vertex can be dropped."""
    _require_dominating(plane, d)
    cnt, verts = _domination_counts(plane, d)
    adj = plane.closed_neighborhoods
    return not any(np.all(cnt[adj[v]] >= 2) for v in verts)


def stability_witness(plane: Plane, d: Candidate) -> tuple[int, int, int] | None:
    """A vertex v outside ``d`` and a pair x, y inside with (d + v) - {x, y} dominating.

    Vertex ids use the incidence-graph numbering (lines offset by n).  For a
    minimal ``d`` the pair never involves v, and dominating sets are closed
    upwards, so this pair search decides stability exactly.
    """
    cnt, verts = _domination_counts(plane, d)
    adj = plane.closed_neighborhoods
    inside = np.zeros(len(adj), dtype=bool)
    inside[verts] = True
    for v in np.flatnonzero(~inside):
        extended = cnt + adj[v]
        removable = [x for x in verts if np.all(extended[adj[x]] >= 2)]
        for x, y in combinations(removable, 2):
            if np.all(extended - adj[x] - adj[y] >= 1):
                return int(v), int(x), int(y)
    return None


def is_stable(plane: Plane, d: Candidate) -> bool:
    _require_dominating(plane, d)
    return is_minimal(plane, d) and stability_witness(plane, d) is None


def is_primal(plane: Plane, d: Candidate) -> bool:
    q = plane.order
    return bool(line_hits(plane, d.points).max() >= q or point_hits(plane, d.lines).max() >= q)


# ---------------------------------------------------------------------------
# spectra and weights


@dataclass(frozen=True)
class SecantSpectrum:
    histogram: dict[int, int]
    k_max: int
    skew_count: int

    @property
    def support(self) -> set[int]:
        return set(self.histogram)

    def to_dict(self) -> dict:
        return {
            "histogram": {str(m): c for m, c in sorted(self.histogram.items())},
            "k_max": self.k_max,
            "skew_count": self.skew_count,
        }


def _spectrum(hits: np.ndarray, size: int, degree: int) -> SecantSpectrum:
    values, counts = np.unique(hits, return_counts=True)
    hist = {int(m): int(c) for m, c in zip(values, counts)}
    # standard equations: incidences and ordered pairs, double counted
    if sum(m * c for m, c in hist.items()) != size * degree or sum(
        m * (m - 1) * c for m, c in hist.items()
    ) != size * (size - 1):
        raise InvalidPlane("standard equations fail; the plane axioms do not hold")
    return SecantSpectrum(hist, int(hits.max()), hist.get(0, 0))


def secant_spectrum(plane: Plane, points) -> SecantSpectrum:
    points = set(points)
    return _spectrum(line_hits(plane, points), len(points), plane.order + 1)


def concurrency_spectrum(plane: Plane, lines) -> SecantSpectrum:
    lines = set(lines)
    return _spectrum(point_hits(plane, lines), len(lines), plane.order + 1)


def _line_weights(hits: np.ndarray, k: int) -> np.ndarray:
    return np.where(hits > 0, (hits - 1) * (hits - k), 0)


def weight(plane: Plane, points, k: int) -> int:
    """Sum of (m-1)(m-k) over the lines meeting the set in m > 0 points."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return int(_line_weights(line_hits(plane, points), k).sum())


@dataclass(frozen=True)
class LineWeights:
    plane: Plane = field(repr=False)
    per_line: np.ndarray = field(repr=False)
    total: int
    heavy: list[int]

    def at(self, line: int, point: int) -> int:
        """Total weight of the lines through ``point`` other than ``line``."""
        if not self.plane.on(point, line):
            raise ValueError(f"point {point} is not on line {line}")
        return int(self.per_line[self.plane.pencils[point]].sum() - self.per_line[line])


def line_weights(plane: Plane, points, k: int) -> LineWeights:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    w = _line_weights(line_hits(plane, points), k)
    total = int(w.sum())
    through = w[plane.pencils].sum(axis=1)
    # total = w(l) + sum over points P of l of the weight of the other lines through P
    per_line_sum = through[plane.lines].sum(axis=1) - plane.order * w
    if np.any(per_line_sum != total):
        raise InvalidPlane("line-weight identity fails; the plane axioms do not hold")
    return LineWeights(plane, w, total, np.flatnonzero(w < 0).tolist())


# ---------------------------------------------------------------------------
# closed-form bounds


def bound_blocked_lines(k_pts: int, q: int) -> int:
    """Most lines a set of k_pts points can block (attained iff collinear)."""
    if k_pts < 1:
        raise ValueError("need at least one point")
    return k_pts * q + 1


def bound_cover(c: int, nlines: int, q: int) -> int:
    """Most points covered by nlines lines whose largest concurrent subset has c lines."""
    if not 1 <= c <= nlines:
        raise ValueError(f"need 1 <= c <= nlines, got c={c}, nlines={nlines}")
    return c * c - (nlines + 1) * c + nlines * (q + 1) + 1


@dataclass(frozen=True)
class MinqqBound:
    lower: int
    gamma_lower: int


def bound_minqq(plane: Plane, d: Candidate) -> MinqqBound:
    """Size bounds forced on a dominating set by how many lines its points can block."""
    q = plane.order
    lower = max(q * q + q - (q - 1) * len(d.points), q * q + q - (q - 1) * len(d.lines))
    # balancing both bounds: |D| >= 2(q^2+q)/(q+1) = 2q
    return MinqqBound(lower, 2 * (q * q + q) // (q + 1))


def bound_lbweird(size_p: int, k: int, size_d: int, q: int) -> int:
    """Lower bound on the weight of the point part of a dominating set."""
    if min(size_p, k, size_d, q) < 0:
        raise ValueError("arguments must be nonnegative")
    return size_p * size_p - (k * q + 1) * size_p + k * (q * q + q + 1 - size_d)


def _implication(hypothesis: bool, conclusion: bool, **values) -> dict:
    status = "vacuous" if not hypothesis else ("satisfied" if conclusion else "violated")
    return {"hypothesis": hypothesis, "conclusion": conclusion, "status": status, **values}


def check_nagyszelo(plane: Plane, d: Candidate) -> dict:
    """Evaluate the short-secant implications on a concrete dominating set.

    A ``violated`` entry means a bug (or a plane that is not projective).
    """
    _require_dominating(plane, d)
    q = plane.order
    P, L, D = len(d.points), len(d.lines), d.size
    k = int(line_hits(plane, d.points).max())
    c = int(point_hits(plane, d.lines).max())
    primal = is_primal(plane, d)
    k_ok, c_ok = k <= P - q + 1, c <= L - q + 1
    return {
        "k_bound": _implication(not primal and D + P <= 4 * q - 3, k_ok, k=k, bound=P - q + 1),
        "c_bound": _implication(not primal and D + L <= 4 * q - 3, c_ok, c=c, bound=L - q + 1),
        "small_set": _implication(not primal and 2 * D <= 5 * q - 3, k_ok and c_ok),
        "big_lines": _implication(L + 2 - q <= c <= q - 1, L >= 4 * q - 2 - D, bound=4 * q - 2 - D),
        "big_points": _implication(P + 2 - q <= k <= q - 1, P >= 4 * q - 2 - D, bound=4 * q - 2 - D),
        "minqq_sizes": _implication(D < 3 * q - 1, P >= q and L >= q),
    }


def check_egyfajta(plane: Plane, points) -> bool:
    """Every line meets the set in 0, 1, k-1 or k points, k the longest secant."""
    pts = _as_candidate(points).points
    spec = secant_spectrum(plane, pts)
    k = spec.k_max
    return spec.support <= {0, 1, k - 1, k}


def tangent_count(plane: Plane, blocking, point: int) -> int:
    """Tangent lines to ``blocking`` through its essential point ``point``."""
    blocking = set(blocking)
    if not is_blocking(plane, blocking):
        raise NotBlocking("set is not blocking")
    if point not in blocking or is_blocking(plane, blocking - {point}):
        raise NotEssential(f"point {point} is not essential for the blocking set")
    hits = line_hits(plane, blocking)
    return int(np.count_nonzero(hits[plane.pencils[point]] == 1))


# ---------------------------------------------------------------------------
# structure recognition


def square_root(q: int) -> int | None:
    r = math.isqrt(q)
    return r if r * r == q else None


def is_baer_subplane(plane: Plane, points) -> bool:
    """q + sqrt(q) + 1 points met by every line in 1 or sqrt(q) + 1 points."""
    r = square_root(plane.order)
    points = set(points)
    if r is None or len(points) != plane.order + r + 1:
        return False
    return secant_spectrum(plane, points).support <= {1, r + 1}


def is_dual_baer(plane: Plane, lines) -> bool:
    r = square_root(plane.order)
    lines = set(lines)
    if r is None or len(lines) != plane.order + r + 1:
        return False
    return concurrency_spectrum(plane, lines).support <= {1, r + 1}


def common_line(plane: Plane, points) -> int | None:
    """The line containing all the points, if they are collinear and at least two."""
    points = list(points)
    if len(points) < 2:
        return None
    found = np.flatnonzero(plane.incidence[:, points].all(axis=1))
    return int(found[0]) if len(found) == 1 else None


def common_point(plane: Plane, lines) -> int | None:
    lines = list(lines)
    if len(lines) < 2:
        return None
    found = np.flatnonzero(plane.incidence[lines].all(axis=0))
    return int(found[0]) if len(found) == 1 else None


def _is_pencil(plane: Plane, lines) -> int | None:
    """The common point when ``lines`` is a full pencil."""
    lines = set(lines)
    if len(lines) != plane.order + 1:
        return None
    return common_point(plane, lines)


def _is_minimal_blocker(plane: Plane, points, skip_line: int | None = None) -> bool:
    """Blocks every line (except ``skip_line``) and no point can be dropped."""
    hits = line_hits(plane, points)
    relevant = np.ones(plane.nlines, dtype=bool)
    if skip_line is not None:
        relevant[skip_line] = False
    if np.any(hits[relevant] == 0):
        return False
    for p in points:
        through = plane.pencils[p]
        through = through[relevant[through]]
        if np.all(hits[through] >= 2):
            return False
    return True


def _full_line(plane: Plane, points) -> bool:
    return bool(np.any(line_hits(plane, points) == plane.order + 1))


def _case_iv_ab(plane: Plane, d: Candidate) -> str | None:
    x = _is_pencil(plane, d.lines)
    if x is not None and x not in d.points:
        for blocker in (set(d.points), set(d.points) | {x}):
            if not _full_line(plane, blocker) and _is_minimal_blocker(plane, blocker):
                return "a"
    if len(d.lines) == plane.order + 2:
        for extra in d.lines:
            rest = d.lines - {extra}
            x = _is_pencil(plane, rest)
            if x is None or plane.on(x, extra) or x in d.points:
                continue
            if any(plane.on(p, extra) for p in d.points):
                continue
            for blocker in (set(d.points), set(d.points) | {x}):
                if _is_minimal_blocker(plane, blocker, skip_line=extra):
                    return "b"
    return None


def _exceeds(value: int, q: int) -> bool:
    """value > sqrt(q), exactly."""
    return value >= 0 and value * value > q


def classify(plane: Plane, d: Candidate) -> str:
    """Structural case label of a minimal dominating set, or ``unclassified``."""
    if not is_minimal(plane, d):
        raise NotMinimal("classification needs a minimal dominating set")
    q = plane.order
    P, L = d.points, d.lines
    primal = is_primal(plane, d)

    if len(P) == q and len(L) == q:
        ln, x = common_line(plane, P), common_point(plane, L)
        if ln is not None and x is not None and plane.on(x, ln) and x not in P and ln not in L:
            return "case_i"
    if len(P) == q + 1 and len(L) == q + 1:
        ln, x = common_line(plane, P), common_point(plane, L)
        if ln is not None and x is not None and not plane.on(x, ln):
            return "case_ii"
    x = _is_pencil(plane, L)
    if x is not None and x not in P and is_baer_subplane(plane, P | {x}):
        return "case_iii_a"
    ln = common_line(plane, P) if len(P) == q + 1 else None
    if ln is not None and ln not in L and is_dual_baer(plane, L | {ln}):
        return "case_iii_b"
    if primal and _exceeds(d.size - 2 * q - 1, q) and d.size < 3 * q - 1 and is_stable(plane, d):
        sub = _case_iv_ab(plane, d)
        if sub is not None:
            return f"case_iv_{sub}"
        if _case_iv_ab(dual(plane), d.swapped()) is not None:
            return "case_iv_c"
    if primal and d.size >= 3 * q - 1:
        return "case_v"
    if not primal and d.size >= 2 * q + 2 * math.isqrt(q) + 2:
        return "nonprimal_vi"
    return "unclassified"


# ---------------------------------------------------------------------------
# full report


@dataclass
class AnalysisReport:
    order: int
    size: int
    num_points: int
    num_lines: int
    flags: dict[str, bool]
    k: int
    c: int
    spectrum: SecantSpectrum
    line_spectrum: SecantSpectrum
    weight: int
    bounds: dict
    nagyszelo: dict | None
    egyfajta: bool
    classification: str

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "size": self.size,
            "num_points": self.num_points,
            "num_lines": self.num_lines,
            "flags": dict(self.flags),
            "k": self.k,
            "c": self.c,
            "spectrum": self.spectrum.to_dict(),
            "line_spectrum": self.line_spectrum.to_dict(),
            "weight": self.weight,
            "bounds": self.bounds,
            "nagyszelo": self.nagyszelo,
            "egyfajta": self.egyfajta,
            "classification": self.classification,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def analyze(plane: Plane, d: Candidate) -> AnalysisReport:
    d.check(plane)
    q = plane.order
    dominating = is_dominating(plane, d)
    minimal = dominating and is_minimal(plane, d)
    stable = minimal and stability_witness(plane, d) is None
    flags = {
        "dominating": dominating,
        "blocking": is_blocking(plane, d.points),
        "covering": is_covering(plane, d.lines),
        "minimal": minimal,
        "stable": stable,
        "primal": is_primal(plane, d),
    }
    spec = secant_spectrum(plane, d.points)
    lspec = concurrency_spectrum(plane, d.lines)
    k, c = spec.k_max, lspec.k_max
    w = weight(plane, d.points, k) if k >= 1 else 0

    bounds: dict = {"gamma_lower": bound_minqq(plane, d).gamma_lower}
    if d.points:
        bounds["blocked_lines"] = {"bound": bound_blocked_lines(len(d.points), q), "actual": blocked_lines(plane, d.points)}
    if d.lines:
        bounds["covered_points"] = {
            "bound": bound_cover(c, len(d.lines), q),
            "actual": covered_points(plane, d.lines),
        }
    if dominating:
        bounds["minqq"] = bound_minqq(plane, d).lower
        bounds["lbweird"] = bound_lbweird(len(d.points), k, d.size, q)

    return AnalysisReport(
        order=q,
        size=d.size,
        num_points=len(d.points),
        num_lines=len(d.lines),
        flags=flags,
        k=k,
        c=c,
        spectrum=spec,
        line_spectrum=lspec,
        weight=w,
        bounds=bounds,
        nagyszelo=check_nagyszelo(plane, d) if dominating else None,
        egyfajta=check_egyfajta(plane, d.points) if d.points else True,
        classification=classify(plane, d) if minimal else "unclassified",
    )
