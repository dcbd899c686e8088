"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 validation or domain error,
3 time budget exhausted.  Errors are one JSON line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from planedom import feasibility, solver
from planedom.constructions import FAMILIES, default_t
from planedom.errors import BudgetExhausted, InvalidPlane, NotApplicable, ParseError, PlaneDomError
from planedom.gf import field_of_order
from planedom.plane import Plane, build_pg2q, dump_plane, load_plane, validate_axioms
from planedom.sets import Candidate, analyze, classify


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _emit(doc, out: str | None = None) -> None:
    text = _dumps(doc)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def pg(q: int) -> Plane:
    return build_pg2q(field_of_order(q))


def _plane_arg(args) -> Plane:
    """The plane named by --plane FILE (validated) or --q."""
    if getattr(args, "plane", None):
        plane = load_plane(_read(args.plane), source=args.plane)
        report = validate_axioms(plane)
        if not report.ok:
            v = report.violations[0]
            raise InvalidPlane(f"{len(report.violations)} axiom violations, first: {v.axiom} {list(v.witness)}")
        return plane
    return pg(args.q)


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> int:
    text = dump_plane(pg(args.q))
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def cmd_validate(args) -> int:
    plane = load_plane(_read(args.plane), source=args.plane)
    report = validate_axioms(plane)
    _emit(report.to_dict())
    return 0 if report.ok else 2


def cmd_construct(args) -> int:
    fam = FAMILIES[args.family]
    if args.q not in fam.orders:
        raise NotApplicable(f"family {fam.name} is defined for q in {list(fam.orders)}, got {args.q}")
    plane = pg(args.q)
    t = args.t if args.t is not None else (default_t(args.q) if fam.name == "pg3qm2" else None)
    cand = fam.build(plane, t)
    if args.out:
        Path(args.out).write_text(cand.to_json() + "\n", encoding="utf-8")
    else:
        print(_dumps(cand.to_dict()))
    print(
        _dumps(
            {
                "family": fam.name,
                "q": args.q,
                "t": t,
                "size": cand.size,
                "expected_size": fam.size(args.q),
                "expected_flags": fam.flags,
            }
        )
    )
    return 0


def cmd_analyze(args) -> int:
    plane = _plane_arg(args)
    cand = Candidate.from_json(_read(args.set)).check(plane)
    print(json.dumps(analyze(plane, cand).to_dict(), sort_keys=True, indent=2))
    return 0


def cmd_gamma(args) -> int:
    plane = _plane_arg(args)
    try:
        res = solver.min_dominating(plane, budget_seconds=args.budget_seconds, use_analytic_bound=args.analytic_bound)
    except BudgetExhausted as exc:
        partial = {"q": plane.order, "status": "budget_exhausted", "lower": exc.lower, "upper": exc.upper}
        if exc.witness is not None:
            partial["witness"] = exc.witness.to_dict()
        _emit(partial)
        raise
    _emit({"q": plane.order, **res.to_dict(), "classification": classify(plane, res.witness)})
    return 0


def cmd_min_blocking(args) -> int:
    plane = _plane_arg(args)
    res = solver.min_blocking(plane, nontrivial=args.nontrivial, budget_seconds=args.budget_seconds)
    doc = {"q": plane.order, "nontrivial": args.nontrivial}
    if res is None:
        doc.update(optimum=None, witness=None)
    else:
        doc.update(res.to_dict())
    _emit(doc)
    return 0


def cmd_enumerate(args) -> int:
    plane = _plane_arg(args)
    found = solver.enumerate_minimal_dominating(plane, args.max_size)
    sets = [{**c.to_dict(), "size": c.size, "classification": classify(plane, c)} for c in found]
    _emit({"q": plane.order, "max_size": args.max_size, "count": len(sets), "sets": sets})
    return 0


def cmd_scan(args) -> int:
    try:
        records = feasibility.scan(args.qmin, args.qmax, all_k=args.all_k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for rec in records:
        print(_dumps(rec.to_dict()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="planedom", description="Dominating sets of finite projective planes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_plane(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--q", type=int, help="order of PG(2,q)")
        g.add_argument("--plane", help="plane JSON file (validated before use)")

    p = sub.add_parser("build", help="write PG(2,q) in the JSON plane format")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("validate", help="check the projective-plane axioms of a plane file")
    p.add_argument("--plane", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("construct", help="build a named dominating-set family on PG(2,q)")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", help="full report on a candidate set")
    with_plane(p)
    p.add_argument("--set", required=True, help="candidate JSON file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gamma", help="domination number with a canonical witness")
    with_plane(p)
    p.add_argument("--budget-seconds", type=float)
    p.add_argument("--analytic-bound", action="store_true", help="stop as soon as the 2q bound is met")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("min-blocking", help="smallest blocking set")
    with_plane(p)
    p.add_argument("--nontrivial", action="store_true", help="exclude sets containing a full line")
    p.add_argument("--budget-seconds", type=float)
    p.set_defaults(func=cmd_min_blocking)

    p = sub.add_parser("enumerate-minimal", help="all minimal dominating sets up to a size")
    with_plane(p)
    p.add_argument("--max-size", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("scan", help="integer-feasible secant configurations, one JSON line each")
    p.add_argument("--qmin", type=int, required=True)
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--all-k", action="store_true", help="also try k = sqrt(q) for square q")
    p.set_defaults(func=cmd_scan)
    return parser


def _error(kind: str, message: str, **extra) -> None:
    print(_dumps({"error": kind, "message": message, **extra}), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _error("UsageError", str(exc))
        return 1
    except BudgetExhausted as exc:
        _error("BudgetExhausted", str(exc), lower=exc.lower, upper=exc.upper)
        return exc.exit_code
    except PlaneDomError as exc:
        _error(type(exc).__name__, str(exc))
        return exc.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
