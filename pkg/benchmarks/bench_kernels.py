"""Compare the numba kernels with the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--qmax 7] [--repeat 3]

Both backends run the same searches and must report identical node counts;
the table shows wall time and node throughput for each.
"""

from __future__ import annotations

import argparse
import time

from planedom import solver
from planedom.cli import pg


def _time(fn, repeat: int):
    best, result = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def cases(qmax: int):
    for q in range(2, qmax + 1):
        if q == 6:
            continue
        plane = pg(q)
        yield f"gamma q={q}", lambda b, plane=plane: solver.min_dominating(plane, threads=1, backend=b).nodes_expanded
    for q in (3, 4):
        plane = pg(q)
        yield f"min-blocking nontrivial q={q}", lambda b, plane=plane: solver.min_blocking(plane, True, backend=b).nodes_expanded
    plane = pg(3)
    yield "enumerate-minimal q=3 size<=7", lambda b: len(solver.enumerate_minimal_dominating(plane, 7, backend=b))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qmax", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    # compile once so numba timings exclude JIT cost
    solver.min_dominating(pg(2), threads=1, backend="numba")
    print(f"{'case':34} {'numba s':>10} {'numpy s':>10} {'speedup':>8} {'count':>8}")
    for name, fn in cases(args.qmax):
        t_nb, r_nb = _time(lambda: fn("numba"), args.repeat)
        t_np, r_np = _time(lambda: fn("numpy"), 1)
        if r_nb != r_np:
            raise SystemExit(f"{name}: backends disagree ({r_nb} vs {r_np})")
        print(f"{name:34} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f} {r_nb:8d}")


if __name__ == "__main__":
    main()
