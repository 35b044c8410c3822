"""Pairwise intersection-dimension kernel: numba against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--case 5:2 --case 4:3]

Each case is ``n:q`` and times the full ``|Omega_n| x |Omega_n|`` matrix.
The two backends must agree exactly; the first numba call (compilation) is
excluded from the timings.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qekr import kernels
from qekr._accel import HAS_NUMBA
from qekr.gfspace import enumerate_all, make_field, pack


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_case(n: int, q: int, repeat: int) -> dict:
    subs = list(enumerate_all(n, q))
    A, d = pack(subs, n)
    tables = make_field(q).tables
    row = {"n": n, "q": q, "size": len(subs), "pairs": len(subs) ** 2}
    ref = kernels.cross_intersection_dims(A, d, A, d, tables, backend="numpy")
    row["numpy_s"] = _time(lambda: kernels.cross_intersection_dims(A, d, A, d, tables, backend="numpy"), repeat)
    if HAS_NUMBA:
        got = kernels.cross_intersection_dims(A, d, A, d, tables, backend="numba")  # compile
        if not np.array_equal(got, ref):
            raise AssertionError(f"backends disagree at n={n}, q={q}")
        row["numba_s"] = _time(lambda: kernels.cross_intersection_dims(A, d, A, d, tables, backend="numba"), repeat)
        row["speedup"] = row["numpy_s"] / row["numba_s"] if row["numba_s"] > 0 else float("inf")
    return row


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--case", action="append", default=None, help="n:q, may repeat")
    args = ap.parse_args(argv)
    cases = args.case or ["4:2", "5:2", "4:3", "3:5"]
    print(f"{'n':>3} {'q':>3} {'|Omega|':>8} {'numpy [s]':>11} {'numba [s]':>11} {'speedup':>8}")
    for c in cases:
        n, q = (int(v) for v in c.split(":"))
        r = run_case(n, q, args.repeat)
        nb = f"{r['numba_s']:11.4f}" if "numba_s" in r else f"{'-':>11}"
        sp = f"{r['speedup']:8.1f}" if "speedup" in r else f"{'-':>8}"
        print(f"{n:>3} {q:>3} {r['size']:>8} {r['numpy_s']:11.4f} {nb} {sp}")
    if not HAS_NUMBA:
        print("numba unavailable or disabled (QEKR_DISABLE_NUMBA); numpy path only")


if __name__ == "__main__":
    main()
