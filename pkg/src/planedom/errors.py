"""Exception hierarchy.

Every error carries the CLI exit code it maps to, so the front end can
translate failures without a lookup table.
"""

from __future__ import annotations


class PlaneDomError(Exception):
    """Base class for domain errors (CLI exit code 2)."""

    exit_code = 2


# field arithmetic
class NotPrime(PlaneDomError, ValueError):
    pass


class Unsupported(PlaneDomError, ValueError):
    pass


class DivisionByZero(PlaneDomError, ZeroDivisionError):
    pass


# planes
class ParseError(PlaneDomError, ValueError):
    pass


class DimensionMismatch(PlaneDomError, ValueError):
    pass


class InvalidPlane(PlaneDomError, ValueError):
    pass


class SamePoint(PlaneDomError, ValueError):
    pass


class SameLine(PlaneDomError, ValueError):
    pass


# candidates and constructions
class NotDominating(PlaneDomError, ValueError):
    pass


class NotMinimal(PlaneDomError, ValueError):
    pass


class NotEssential(PlaneDomError, ValueError):
    pass


class NotBlocking(PlaneDomError, ValueError):
    pass


class NotIncident(PlaneDomError, ValueError):
    pass


class Incident(PlaneDomError, ValueError):
    pass


class NotSquareOrder(PlaneDomError, ValueError):
    pass


class NotBaer(PlaneDomError, ValueError):
    pass


class BadParameter(PlaneDomError, ValueError):
    pass


# search
class TooLarge(PlaneDomError, ValueError):
    pass


class BudgetExhausted(PlaneDomError):
    """Raised when a search runs out of time; carries the bounds proven so far."""

    exit_code = 3

    def __init__(self, message: str, lower: int, upper: int, witness=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
        self.witness = witness


# feasibility
class NoBaseType(PlaneDomError, ValueError):
    pass


class NotApplicable(PlaneDomError, ValueError):
    pass
