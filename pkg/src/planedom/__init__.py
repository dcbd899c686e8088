"""Finite projective planes and small dominating sets of their incidence graphs."""

from planedom.gf import FieldSpec, arith, field_new, field_of_order
from planedom.plane import Plane, build_pg2q, dual, load_plane, validate_axioms
from planedom.sets import Candidate, analyze, classify

__all__ = [
    "Candidate",
    "FieldSpec",
    "Plane",
    "analyze",
    "arith",
    "build_pg2q",
    "classify",
    "dual",
    "field_new",
    "field_of_order",
    "load_plane",
    "validate_axioms",
]

__version__ = "0.1.0"
