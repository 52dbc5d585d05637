"""Compiled versus pure-Python kernels on the same workloads.

    python benchmarks/bench_backends.py [--n 20000] [--out backends.csv]

Each workload is built and queried once per backend with the same seed; the
answers must agree and the table shows the speedup.
"""
import argparse
import csv
import sys
import time

import numpy as np

from orthrange import kernels
from orthrange.core import QueryBox
from orthrange.cuttings import StaircaseCutting
from orthrange.offline import maxima, offline_dominance
from orthrange.range2d import RangeReport2D
from orthrange.range3d import Range3D


def w_range2d(n, g):
    P = np.stack([g.permutation(n), g.permutation(n)], 1)
    s = RangeReport2D(P)
    side = int(np.sqrt(n))
    out = []
    for a in g.integers(0, n - side, size=(500, 2)).tolist():
        out.append(sorted(p.id for p in s.report(QueryBox.closed(a, (a[0] + side, a[1] + side)))))
    return out


def w_range3d(n, g):
    P = g.integers(0, 2**30, size=(n, 3))
    s = Range3D(P, 5)
    w = int(2**30 * n ** (-1 / 3))
    out = []
    for a in g.integers(0, 2**30, size=(500, 3)).tolist():
        out.append(sorted(s.report_ids(QueryBox((a[0], a[1], None), (a[0] + w, a[1] + w, a[2]))).tolist()))
    return out


def w_cutting(n, g):
    S = g.integers(0, 2**30, size=(n, 3))
    return StaircaseCutting(S, 64, g).stats()["total"]


def w_dominance4(n, g):
    P = g.integers(0, 2**30, size=(n, 4))
    Q = g.integers(0, int(2 * 2**30 * n ** -0.25), size=(n, 4))
    return sorted(offline_dominance(P, Q, seed=1).pairs())


def w_maxima(n, g):
    return maxima(g.integers(0, 2**30, size=(n, 3)), 3).tolist()


WORKLOADS = {"range2d": w_range2d, "range3d5": w_range3d, "cutting": w_cutting,
             "dominance4d": w_dominance4, "maxima3d": w_maxima}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    if "c" not in kernels.available():
        sys.exit("compiled kernels not built; reinstall with a C compiler")
    rows = []
    for name, fn in WORKLOADS.items():
        times, answers = {}, {}
        for backend in ("c", "python"):
            with kernels.backend(backend):
                t0 = time.perf_counter()
                answers[backend] = fn(args.n, np.random.default_rng(args.seed))
                times[backend] = time.perf_counter() - t0
        agree = answers["c"] == answers["python"]
        rows.append((name, args.n, round(times["c"], 4), round(times["python"], 4),
                     round(times["python"] / times["c"], 1), agree))
        print(f"{name:12s} n={args.n}  c {times['c']:8.3f}s  python {times['python']:8.3f}s  "
              f"x{times['python'] / times['c']:6.1f}  {'agree' if agree else 'MISMATCH'}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(("workload", "n", "c_s", "python_s", "speedup", "answers_agree"))
            w.writerows(rows)
    if not all(r[-1] for r in rows):
        sys.exit(1)


if __name__ == "__main__":
    main()
