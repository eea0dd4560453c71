"""Coverage and mean width of both constructions across the Hurst grid.

``--target band`` evaluates bands for F(x) on ``--points``; ``--target
quantile`` evaluates intervals for the quantiles listed in ``--points``.
"""
from __future__ import annotations

import argparse

from lrdci.cli import parse_grid
from lrdci.montecarlo import ExperimentConfig, run_coverage_experiment, write_report_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--target", choices=("band", "quantile"), default="band")
    ap.add_argument("--points", default=None, help="x grid (band, default 0) or p list (quantile, default 0.5)")
    ap.add_argument("--hurst-grid", default="0.55:0.95:0.05")
    ap.add_argument("--lengths", default="200")
    ap.add_argument("--reps", type=int, default=500)
    ap.add_argument("--alpha", type=float, default=0.05)
    ap.add_argument("--hurst-mode", choices=("known", "estimated"), default="known")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    points = args.points or ("0" if args.target == "band" else "0.5")
    config = ExperimentConfig(
        hurst_grid=tuple(parse_grid(args.hurst_grid)),
        lengths=tuple(int(v) for v in args.lengths.split(",")),
        reps=args.reps,
        alpha=args.alpha,
        target=args.target,
        points=tuple(parse_grid(points)),
        hurst_mode=args.hurst_mode,
        base_seed=args.seed,
    )
    report = run_coverage_experiment(config, threads=args.threads)
    out = args.out or f"results/{args.target}_{args.hurst_mode}.csv"
    write_report_csv(report, out)
    print(f"{'H':>5} {'N':>5} {'method':>10} {'point':>6} {'coverage':>9} {'width':>8} failed")
    for r in report.rows:
        print(f"{r.hurst:5.2f} {r.N:5d} {r.method:>10} {r.point:6.2f} {r.coverage:9.3f} {r.mean_width:8.4f} {r.reps_failed}")


if __name__ == "__main__":
    main()
