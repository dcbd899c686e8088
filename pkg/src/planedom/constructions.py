"""Deterministic builders for the named small dominating sets.

Every builder returns a :class:`~planedom.sets.Candidate`.  :data:`FAMILIES`
maps the CLI family names to a default builder on PG(2,q), its size formula,
the flags it is expected to carry and the orders where it applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from planedom.errors import (
    BadParameter,
    Incident,
    NotApplicable,
    NotBaer,
    NotBlocking,
    NotIncident,
    NotSquareOrder,
    SamePoint,
)
from planedom.plane import Plane, line_through
from planedom.sets import Candidate, is_baer_subplane, is_blocking, line_hits, square_root


def _require_on(plane: Plane, point: int, line: int) -> None:
    if not plane.on(point, line):
        raise NotIncident(f"point {point} is not on line {line}")


def _sqrt_order(plane: Plane) -> int:
    r = square_root(plane.order)
    if r is None:
        raise NotSquareOrder(f"order {plane.order} is not a square")
    return r


def _require_coords(plane: Plane, what: str) -> None:
    if plane.field_spec is None or plane.point_coords is None:
        raise NotApplicable(f"{what} needs a coordinatized (Desarguesian) plane")


def family_i(plane: Plane, line: int, point: int) -> Candidate:
    """q points of a line and the q other lines through one of its points."""
    _require_on(plane, point, line)
    pts = set(plane.lines[line].tolist()) - {point}
    lns = set(plane.pencils[point].tolist()) - {line}
    return Candidate(pts, lns)


def family_ii(plane: Plane, line: int, point: int) -> Candidate:
    """A full line together with the full pencil of a point off it."""
    if plane.on(point, line):
        raise Incident(f"point {point} lies on line {line}")
    return Candidate(plane.lines[line].tolist(), plane.pencils[point].tolist())


def blocking_plus_pencil(plane: Plane, blocking, point: int) -> Candidate:
    """(B minus P) together with the pencil of P; size |B|+q or |B|+q+1."""
    blocking = set(blocking)
    if not is_blocking(plane, blocking):
        raise NotBlocking("set is not blocking")
    return Candidate(blocking - {point}, plane.pencils[point].tolist())


def family_iii(plane: Plane, baer, point: int) -> Candidate:
    """A Baer subplane minus one of its points, plus the pencil of that point."""
    _sqrt_order(plane)
    baer = set(baer)
    if not is_baer_subplane(plane, baer):
        raise NotBaer("point set is not a Baer subplane")
    if point not in baer:
        raise NotBaer(f"point {point} is not in the subplane")
    return blocking_plus_pencil(plane, baer, point)


def baer_subplane(plane: Plane) -> list[int]:
    """Points whose normalized coordinates all lie in the subfield of order sqrt(q)."""
    r = _sqrt_order(plane)
    _require_coords(plane, "baer_subplane")
    sub = np.zeros(plane.order, dtype=bool)
    sub[plane.field_spec.subfield(r)] = True
    return np.flatnonzero(sub[plane.point_coords].all(axis=1)).tolist()


def dual_baer(plane: Plane, baer) -> list[int]:
    """The (sqrt(q)+1)-secants of a Baer subplane."""
    r = _sqrt_order(plane)
    hits = line_hits(plane, baer)
    return np.flatnonzero(hits == r + 1).tolist()


def baer_union(plane: Plane) -> Candidate:
    baer = baer_subplane(plane)
    return Candidate(baer, dual_baer(plane, baer))


def conic(plane: Plane) -> list[int]:
    """Points of y^2 = xz."""
    _require_coords(plane, "conic")
    f = plane.field_spec
    x, y, z = plane.point_coords.T
    return np.flatnonzero(np.asarray(f.mul(y, y)) == np.asarray(f.mul(x, z))).tolist()


def oval(plane: Plane) -> list[int]:
    """The conic for odd q, the conic plus its nucleus for even q."""
    pts = conic(plane)
    if plane.order % 2 == 0:
        hits = line_hits(plane, pts)
        tangents = np.flatnonzero(hits == 1)
        common = np.flatnonzero(plane.incidence[tangents].all(axis=0))
        pts = sorted(pts + common.tolist())
    return pts


def oval_plus_skew(plane: Plane) -> Candidate:
    pts = oval(plane)
    return Candidate(pts, np.flatnonzero(line_hits(plane, pts) == 0).tolist())


def nonstable_3q_minus_1(plane: Plane, line: int, p: int, q: int) -> Candidate:
    """The line minus P, Q together with the other lines through P and through Q."""
    if p == q:
        raise SamePoint(f"point {p} given twice")
    _require_on(plane, p, line)
    _require_on(plane, q, line)
    pts = set(plane.lines[line].tolist()) - {p, q}
    lns = (set(plane.pencils[p].tolist()) | set(plane.pencils[q].tolist())) - {line}
    return Candidate(pts, lns)


def pg_3q_minus_2(plane: Plane, t: int) -> Candidate:
    """A dominating set of size 3q-2 that neither blocks nor covers.

    With l0 = {P0, ..., Pq}, [P0] = {l0, ..., lq} and l1 = {P0, Q1, ..., Qq}:
    points P2..Pq, Q1..Qt and lines l2..lq, P1Q(t+1)..P1Qq.  The lines through
    P1 are the ones that dominate P1 and the points Q(t+1)..Qq.
    """
    q = plane.order
    if not 1 <= t <= q - 1:
        raise BadParameter(f"t must satisfy 1 <= t <= q-1 = {q - 1}, got {t}")
    l0 = 0
    p0, *ps = plane.lines[l0].tolist()
    l1, *others = [ln for ln in plane.pencils[p0].tolist() if ln != l0]
    qs = [pt for pt in plane.lines[l1].tolist() if pt != p0]
    pts = set(ps[1:]) | set(qs[:t])
    lns = set(others) | {line_through(plane, ps[0], qj) for qj in qs[t:]}
    return Candidate(pts, lns)


# ---------------------------------------------------------------------------
# registry used by the CLI and the acceptance checks


def _first_flag(plane: Plane) -> tuple[int, int]:
    """Line 0 and its first point."""
    return 0, int(plane.lines[0][0])


def _default_i(plane: Plane, t: int | None) -> Candidate:
    return family_i(plane, *_first_flag(plane))


def _default_ii(plane: Plane, t: int | None) -> Candidate:
    off = int(np.flatnonzero(~plane.incidence[0])[0])
    return family_ii(plane, 0, off)


def _default_iii(plane: Plane, t: int | None) -> Candidate:
    baer = baer_subplane(plane)
    return family_iii(plane, baer, baer[0])


def _default_blocking_pencil(plane: Plane, t: int | None) -> Candidate:
    baer = baer_subplane(plane)
    outside = sorted(set(range(plane.npoints)) - set(baer))[0]
    return blocking_plus_pencil(plane, baer, outside)


def _default_nonstable(plane: Plane, t: int | None) -> Candidate:
    p, q = plane.lines[0][:2]
    return nonstable_3q_minus_1(plane, 0, int(p), int(q))


def _default_pg(plane: Plane, t: int | None) -> Candidate:
    return pg_3q_minus_2(plane, default_t(plane.order) if t is None else t)


def _default_baer(plane: Plane, t: int | None) -> Candidate:
    return Candidate(baer_subplane(plane), ())


def default_t(q: int) -> int:
    return max(1, (q - 1) // 2)


def _r(q: int) -> int:
    return math.isqrt(q)


@dataclass(frozen=True)
class Family:
    name: str
    build: Callable[[Plane, int | None], Candidate]
    size: Callable[[int], int]
    flags: dict[str, bool]
    orders: tuple[int, ...]
    description: str


_SQUARES = (4, 9)

FAMILIES: dict[str, Family] = {
    f.name: f
    for f in (
        Family(
            "i", _default_i, lambda q: 2 * q,
            {"dominating": True, "minimal": True, "stable": True, "primal": True, "blocking": False, "covering": False},
            (2, 3, 4, 5, 7, 8, 9), "q points of a line and q lines through a point of it",
        ),
        Family(
            "ii", _default_ii, lambda q: 2 * q + 2,
            {"dominating": True, "minimal": True, "primal": True, "blocking": True, "covering": True},
            (2, 3, 4, 5, 7, 8, 9), "a full line and the full pencil of a point off it",
        ),
        Family(
            "iii", _default_iii, lambda q: 2 * q + _r(q) + 1,
            {"dominating": True, "minimal": True, "stable": True, "primal": True, "blocking": False, "covering": True},
            _SQUARES, "Baer subplane minus a point, plus the pencil of that point",
        ),
        Family(
            "blocking-pencil", _default_blocking_pencil, lambda q: 2 * q + _r(q) + 2,
            {"dominating": True, "primal": True, "blocking": True, "covering": True},
            _SQUARES, "Baer subplane plus the pencil of a point outside it",
        ),
        Family(
            "baer", _default_baer, lambda q: q + _r(q) + 1,
            {"dominating": False, "blocking": True},
            _SQUARES, "the points of a Baer subplane (not dominating on its own)",
        ),
        Family(
            "baer-union", lambda plane, t: baer_union(plane), lambda q: 2 * q + 2 * _r(q) + 2,
            {"dominating": True, "primal": False, "blocking": True, "covering": True},
            _SQUARES, "Baer subplane and its own long secants",
        ),
        Family(
            "oval-skew", lambda plane, t: oval_plus_skew(plane),
            lambda q: q + 1 + q * (q - 1) // 2 + (q % 2 == 0),
            {"dominating": True, "primal": False},
            (3, 4, 5, 7, 8, 9), "oval (q odd) or hyperoval (q even) and its skew lines",
        ),
        Family(
            "nonstable", _default_nonstable, lambda q: 3 * q - 1,
            {"dominating": True, "stable": False, "primal": True},
            (2, 3, 4, 5, 7, 8, 9), "a line minus two points and the other lines through both",
        ),
        Family(
            "pg3qm2", _default_pg, lambda q: 3 * q - 2,
            {"dominating": True, "blocking": False, "covering": False},
            (3, 4, 5, 7, 8, 9), "dominating set of size 3q-2 that neither blocks nor covers",
        ),
    )
}
