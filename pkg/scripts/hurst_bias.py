"""Bias of the R/S Hurst estimate on simulated fGn."""
from __future__ import annotations

import argparse

import numpy as np

from lrdci import generate_fgn, replication_seed, rs_hurst


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--hurst", default="0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95")
    ap.add_argument("--length", type=int, default=4096)
    ap.add_argument("--runs", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    print("hurst,mean_estimate,bias,sd")
    for h in (float(v) for v in args.hurst.split(",")):
        est = np.array(
            [rs_hurst(generate_fgn(h, args.length, replication_seed(args.seed, r)).values) for r in range(args.runs)]
        )
        print(f"{h:g},{est.mean():.4f},{est.mean() - h:+.4f},{est.std(ddof=1):.4f}")


if __name__ == "__main__":
    main()
