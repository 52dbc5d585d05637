"""One-time calibration of the conflict-list size constant.

The rule is fixed before looking at any data: run 100 trials of a K = 64
cutting on uniform 3-d inputs at each n in {10^3, 10^4, 10^5}, using
calibration seeds 1_000_000 + trial (never used by the tests), and set

    c = ceil(10 * max over all trials of max|list| / (K ln n)) / 10

The result goes to src/orthrange/config/cuttings_calibration.json; run it
again only when the cutting construction changes.
"""
import argparse
import json
import math
import pathlib
import time

import numpy as np

from orthrange.cuttings import StaircaseCutting

SIZES = (1000, 10000, 100000)
K = 64
TRIALS = 100
SEED_BASE = 1_000_000
OUT = pathlib.Path(__file__).resolve().parents[1] / "src/orthrange/config/cuttings_calibration.json"


def ratios(n, trials=TRIALS):
    out = []
    for t in range(trials):
        g = np.random.default_rng([SEED_BASE + t, n])
        S = g.integers(0, 2**30, size=(n, 3))
        cut = StaircaseCutting(S, K, g)
        out.append(cut.stats()["max"] / (K * math.log(n)))
    return np.array(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(OUT))
    args = ap.parse_args()
    t0 = time.time()
    per_n = {}
    for n in SIZES:
        r = ratios(n)
        per_n[str(n)] = {"max_ratio": float(r.max()), "mean_ratio": float(r.mean())}
        print(f"n={n}: max ratio {r.max():.4f}, mean {r.mean():.4f}")
    worst = max(v["max_ratio"] for v in per_n.values())
    c = math.ceil(10 * worst) / 10
    record = {
        "c": c,
        "K": K,
        "trials": TRIALS,
        "sizes": list(SIZES),
        "seed_base": SEED_BASE,
        "rule": "c = ceil(10 * max_trials max|list| / (K ln n)) / 10",
        "per_n": per_n,
        "seconds": round(time.time() - t0, 1),
    }
    with open(args.out, "w") as fh:
        json.dump(record, fh, indent=2)
        fh.write("\n")
    print(f"c = {c} written to {args.out}")


if __name__ == "__main__":
    main()
