"""Variance of the normalized residual partial sums against the Bartlett
long-run variance of one long path, at t = 1 and t = 1/2.
"""
from __future__ import annotations

import argparse
import math

import numpy as np

from lrdci import LrdModel, bartlett_lrv, decompose, default_bandwidth, replication_seed, simulate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--hurst", type=float, default=0.9)
    ap.add_argument("--x", type=float, default=0.0)
    ap.add_argument("--length", type=int, default=2**12)
    ap.add_argument("--long-length", type=int, default=2**16)
    ap.add_argument("--reps", type=int, default=500)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    model, n = LrdModel(args.hurst), args.length
    full, half = np.empty(args.reps), np.empty(args.reps)
    for r in range(args.reps):
        _, _, resid = decompose(simulate(model, n, replication_seed(args.seed, r)), model, [args.x])
        full[r] = resid[:, 0].sum() / math.sqrt(n)
        half[r] = resid[: n // 2, 0].sum() / math.sqrt(n)
    long_path = simulate(model, args.long_length, replication_seed(args.seed, args.reps))
    _, _, long_resid = decompose(long_path, model, [args.x])
    lrv = bartlett_lrv(long_resid[:, 0], default_bandwidth(args.long_length))

    print(f"var(t=1)   = {np.var(full, ddof=1):.5f}")
    print(f"var(t=1/2) = {np.var(half, ddof=1):.5f}")
    print(f"Bartlett   = {lrv.value:.5f} (bandwidth {lrv.bandwidth})")


if __name__ == "__main__":
    main()
