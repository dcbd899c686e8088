"""Projective planes as incidence structures.

A :class:`Plane` stores incidence twice, as per-line bit rows over point ids
and per-point bit rows over line ids.  Desarguesian planes come from
:func:`build_pg2q`; anything else can be loaded from the JSON plane format
and must pass :func:`validate_axioms` before it is analysed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from planedom import bitset
from planedom.errors import DimensionMismatch, InvalidPlane, ParseError, SameLine, SamePoint
from planedom.gf import FieldSpec


def plane_size(q: int) -> int:
    return q * q + q + 1


@dataclass(frozen=True, eq=False)
class Plane:
    order: int
    line_bits: np.ndarray = field(repr=False)
    point_bits: np.ndarray = field(repr=False)
    tag: str = "loaded"
    source: str = ""
    field_spec: FieldSpec | None = field(default=None, repr=False)
    point_coords: np.ndarray | None = field(default=None, repr=False)
    line_coords: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return plane_size(self.order)

    @property
    def npoints(self) -> int:
        return self.point_bits.shape[0]

    @property
    def nlines(self) -> int:
        return self.line_bits.shape[0]

    @property
    def is_desarguesian(self) -> bool:
        return self.tag == "desarguesian"

    @cached_property
    def incidence(self) -> np.ndarray:
        """Dense boolean matrix indexed ``[line, point]``."""
        return bitset.unpack(self.line_bits, self.npoints)

    @cached_property
    def lines(self) -> np.ndarray:
        """``(n, q+1)`` array: the sorted point ids of every line."""
        return self._regular_rows(self.incidence, "line")

    @cached_property
    def pencils(self) -> np.ndarray:
        """``(n, q+1)`` array: the sorted line ids through every point."""
        return self._regular_rows(self.incidence.T, "point")

    def _regular_rows(self, inc: np.ndarray, what: str) -> np.ndarray:
        sizes = inc.sum(axis=1)
        if np.any(sizes != self.order + 1):
            bad = int(np.flatnonzero(sizes != self.order + 1)[0])
            raise InvalidPlane(f"{what} {bad} has {int(sizes[bad])} incidences, expected {self.order + 1}")
        return np.nonzero(inc)[1].reshape(inc.shape[0], self.order + 1)

    @cached_property
    def closed_neighborhoods(self) -> np.ndarray:
        """``(2n, 2n)`` boolean matrix of the incidence graph plus loops.

        Vertices ``0..n-1`` are points and ``n..2n-1`` are lines.
        """
        npts, nlns = self.npoints, self.nlines
        adj = np.eye(npts + nlns, dtype=bool)
        adj[:npts, npts:] = self.incidence.T
        adj[npts:, :npts] = self.incidence
        return adj

    def line_points(self, line: int) -> list[int]:
        return bitset.indices(self.line_bits[line], self.npoints)

    def point_lines(self, point: int) -> list[int]:
        return bitset.indices(self.point_bits[point], self.nlines)

    def on(self, point: int, line: int) -> bool:
        return bool(self.line_bits[line, point // 64] >> np.uint64(point % 64) & np.uint64(1))


def _from_line_lists(q: int, lines, **kwargs) -> Plane:
    npts = kwargs.pop("npoints", plane_size(q))
    line_bits = bitset.from_indices(lines, npts)
    inc = bitset.unpack(line_bits, npts)
    point_bits = bitset.pack(inc.T)
    return Plane(q, line_bits, point_bits, **kwargs)


def _normalized_triples(spec: FieldSpec) -> np.ndarray:
    """All normalized homogeneous triples in lexicographic order."""
    q = spec.q
    e = np.arange(q)
    head = [np.array([[0, 0, 1]])]
    head.append(np.column_stack([np.zeros(q, int), np.ones(q, int), e]))
    yy, zz = np.meshgrid(e, e, indexing="ij")
    head.append(np.column_stack([np.ones(q * q, int), yy.ravel(), zz.ravel()]))
    return np.concatenate(head).astype(np.int64)


def build_pg2q(spec: FieldSpec, chunk: int = 256) -> Plane:
    """PG(2,q) over ``spec``.  Point and line ids follow lexicographic order
    of normalized coordinates; a point lies on a line iff the dot product of
    their coordinate triples is zero."""
    q = spec.q
    coords = _normalized_triples(spec)
    n = len(coords)
    lines = []
    for start in range(0, n, chunk):
        lc = coords[start : start + chunk]
        dot = spec.mul(lc[:, None, 0], coords[None, :, 0])
        dot = spec.add(dot, spec.mul(lc[:, None, 1], coords[None, :, 1]))
        dot = spec.add(dot, spec.mul(lc[:, None, 2], coords[None, :, 2]))
        lines.extend(np.nonzero(row == 0)[0] for row in np.asarray(dot))
    return _from_line_lists(
        q, lines, tag="desarguesian", source=f"PG(2,{q})", field_spec=spec, point_coords=coords, line_coords=coords
    )


def from_incidence(q: int, incidence: np.ndarray, source: str = "matrix") -> Plane:
    """Wrap an arbitrary ``[line, point]`` 0/1 matrix without checking it."""
    incidence = np.asarray(incidence, dtype=bool)
    return Plane(q, bitset.pack(incidence), bitset.pack(incidence.T), tag="loaded", source=source)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[int, ...]
    detail: str


@dataclass
class ValidationReport:
    order: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "valid": self.ok,
            "violations": [{"axiom": v.axiom, "witness": list(v.witness), "detail": v.detail} for v in self.violations],
        }


def _pair_counts(rows: np.ndarray, chunk: int = 2048):
    """Yield ``(start, block)`` with block[i, j] = |row_{start+i} ∩ row_j|."""
    dense = rows.astype(np.float32)
    for start in range(0, len(dense), chunk):
        yield start, (dense[start : start + chunk] @ dense.T).astype(np.int64)


def validate_axioms(plane: Plane) -> ValidationReport:
    """Check every projective-plane axiom and report each violation with a witness."""
    q, n = plane.order, plane.n
    report = ValidationReport(q)
    add = report.violations.append
    if plane.npoints != n or plane.nlines != n:
        add(Violation("counts", (plane.npoints, plane.nlines), f"expected {n} points and {n} lines"))
        return report

    inc = plane.incidence
    for ln in np.flatnonzero(inc.sum(axis=1) != q + 1):
        add(Violation("line_size", (int(ln),), f"line has {int(inc[ln].sum())} points, expected {q + 1}"))
    for pt in np.flatnonzero(inc.sum(axis=0) != q + 1):
        add(Violation("point_degree", (int(pt),), f"point lies on {int(inc[:, pt].sum())} lines, expected {q + 1}"))

    transposed = bitset.unpack(plane.point_bits, plane.nlines).T
    for ln, pt in zip(*np.nonzero(transposed != inc)):
        add(Violation("transpose", (int(ln), int(pt)), "line and point rows disagree"))

    for axiom, rows, what in (("two_points", inc.T, "lines"), ("two_lines", inc, "points")):
        for start, block in _pair_counts(rows):
            i, j = np.nonzero(block != 1)
            i = i + start
            keep = i < j
            for a, b in zip(i[keep], j[keep]):
                add(Violation(axiom, (int(a), int(b)), f"{int(block[a - start, b])} common {what}, expected 1"))
    return report


# ---------------------------------------------------------------------------
# incidence queries


def line_through(plane: Plane, p: int, q: int) -> int:
    if p == q:
        raise SamePoint(f"point {p} given twice")
    common = bitset.indices(plane.point_bits[p] & plane.point_bits[q], plane.nlines)
    if len(common) != 1:
        raise InvalidPlane(f"points {p}, {q} share {len(common)} lines")
    return common[0]


def meet(plane: Plane, l: int, m: int) -> int:
    if l == m:
        raise SameLine(f"line {l} given twice")
    common = bitset.indices(plane.line_bits[l] & plane.line_bits[m], plane.npoints)
    if len(common) != 1:
        raise InvalidPlane(f"lines {l}, {m} share {len(common)} points")
    return common[0]


def pencil(plane: Plane, p: int) -> list[int]:
    return plane.point_lines(p)


def dual(plane: Plane) -> Plane:
    """Swap the roles of points and lines."""
    return Plane(
        plane.order,
        plane.point_bits.copy(),
        plane.line_bits.copy(),
        tag=plane.tag,
        source=f"dual({plane.source})",
        field_spec=plane.field_spec,
        point_coords=plane.line_coords,
        line_coords=plane.point_coords,
    )


# ---------------------------------------------------------------------------
# JSON plane format


def dump_plane(plane: Plane) -> str:
    doc = {
        "order": plane.order,
        "points": plane.npoints,
        "lines": [plane.line_points(ln) for ln in range(plane.nlines)],
    }
    return json.dumps(doc, separators=(",", ":"))


def load_plane(document: bytes | str, source: str = "document") -> Plane:
    """Parse the JSON plane format.  The result is not trusted until validated."""
    try:
        doc = json.loads(document)
        q = doc["order"]
        npts = doc["points"]
        lines = doc["lines"]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"not a plane document: {exc}") from None
    if not (isinstance(q, int) and isinstance(npts, int) and isinstance(lines, list)) or q < 1:
        raise ParseError("order and points must be integers and lines a list")
    n = plane_size(q)
    if npts != n:
        raise DimensionMismatch(f"order {q} needs {n} points, document declares {npts}")
    if len(lines) != n:
        raise DimensionMismatch(f"order {q} needs {n} lines, document has {len(lines)}")
    clean = []
    for i, ln in enumerate(lines):
        if not isinstance(ln, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in ln):
            raise ParseError(f"line {i} is not a list of integers")
        if len(set(ln)) != len(ln):
            raise ParseError(f"line {i} repeats a point id")
        if any(x < 0 or x >= n for x in ln):
            raise ParseError(f"line {i} has a point id outside [0, {n})")
        if len(ln) != q + 1:
            raise DimensionMismatch(f"line {i} has {len(ln)} points, expected {q + 1}")
        clean.append(sorted(ln))
    return _from_line_lists(q, clean, tag="loaded", source=source)
