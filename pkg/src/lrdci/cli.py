"""Command-line front end.

Exit status: 0 on success, 1 on usage errors (message on stderr), 2 on
numeric or estimation failures.
"""
from __future__ import annotations

import argparse
import math
import re
import sys

import numpy as np

from . import csvio
from .confidence import (
    asymptotic_band,
    asymptotic_quantile_ci,
    hoa_band,
    hoa_quantile_ci,
    resolve_hurst,
)
from .empproc import decompose, sampling_distribution_samples
from .errors import DomainError, LrdError
from .estimators import bartlett_lrv, default_bandwidth, rs_hurst
from .gaussgen import TRANSFORMS, LrdModel, simulate
from .montecarlo import ExperimentConfig, run_coverage_experiment, write_report_csv

GRID_HELP = "START:STOP:STEP, endpoints inclusive within half a step (a single number is a one-point grid)"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let values such as "-3:3:0.1" or "-1,0,1" through as arguments, not flags
        self._negative_number_matcher = re.compile(r"^-\.?\d[\d.eE:,+-]*$")

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` inclusive of ``stop`` within half a step, or a comma list."""
    try:
        if ":" not in text:
            return np.array([float(v) for v in text.split(",")])
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"bad grid {text!r}; expected {GRID_HELP}") from None
    if step <= 0 or stop < start:
        raise UsageError(f"bad grid {text!r}: need step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return np.round(start + step * np.arange(count), 12)


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad integer list {text!r}") from None


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="lrdci",
        description="Confidence regions for long-range dependent time series.",
        epilog=f"Grids: {GRID_HELP}. Exit status: 0 ok, 1 usage error, 2 numeric/estimation error.",
    )
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    transforms = sorted(TRANSFORMS)

    g = sub.add_parser("generate", help="simulate (subordinated) fGn to CSV")
    g.add_argument("--hurst", type=float, required=True, help="Hurst index in (0.5, 1)")
    g.add_argument("--length", type=int, required=True, help="number of observations")
    g.add_argument("--seed", type=_seed, required=True, help="64-bit unsigned seed")
    g.add_argument("--transform", choices=transforms, default="identity", help="marginal transform G")
    g.add_argument("--out", required=True, help="output CSV (index,value,driver)")

    h = sub.add_parser("hurst", help="R/S estimate of the Hurst index")
    h.add_argument("--input", required=True, help="series CSV")

    lv = sub.add_parser("lrv", help="Bartlett long-run variance of a series or of S_n(x)")
    lv.add_argument("--input", required=True, help="series CSV")
    lv.add_argument("--x", type=float, help="evaluate the residual series S_n(x) at this point")
    lv.add_argument("--hurst", type=float, help="Hurst index for the S_n(x) split (default: R/S estimate)")
    lv.add_argument("--transform", choices=transforms, default="identity", help="marginal transform G")
    lv.add_argument("--bandwidth", type=int, help="Bartlett bandwidth (default floor(N^(1/3)))")

    for name, what in (("band", "confidence band for F(x)"), ("quantile-ci", "confidence interval for F^-1(p)")):
        b = sub.add_parser(name, help=what)
        b.add_argument("--input", required=True, help="series CSV")
        b.add_argument("--method", choices=("asymptotic", "hoa"), required=True, help="construction")
        b.add_argument("--alpha", type=float, required=True, help="1 - confidence level")
        if name == "band":
            b.add_argument("--grid", required=True, help=f"x grid: {GRID_HELP}")
        else:
            b.add_argument("--p", type=float, required=True, help="quantile level in (0, 1)")
        b.add_argument("--hurst", type=float, help="Hurst index (default: R/S estimate)")
        b.add_argument("--transform", choices=transforms, default="identity", help="marginal transform G")
        b.add_argument("--bandwidth", type=int, help="Bartlett bandwidth for hoa (default floor(N^(1/3)))")
        b.add_argument("--out", required=True, help="output CSV (x,lower,upper,center,method,level)")

    c = sub.add_parser("coverage", help="Monte Carlo coverage study")
    c.add_argument("--hurst-grid", required=True, help=f"Hurst values: {GRID_HELP}")
    c.add_argument("--length", required=True, help="sample size(s), comma separated")
    c.add_argument("--reps", type=int, default=500, help="replications per cell (default 500)")
    c.add_argument("--alpha", type=float, required=True, help="1 - confidence level")
    tgt = c.add_mutually_exclusive_group(required=True)
    tgt.add_argument("--p", help="quantile level(s), comma separated")
    tgt.add_argument("--grid", help=f"x points for bands: {GRID_HELP}")
    c.add_argument("--hurst-mode", choices=("known", "estimated"), default="known", help="H known or R/S-estimated")
    c.add_argument("--seed", type=_seed, required=True, help="base seed; replication r uses seed ^ r")
    c.add_argument("--threads", type=int, help="worker processes (default: CPU count)")
    c.add_argument("--transform", choices=transforms, default="identity", help="marginal transform G")
    c.add_argument("--bandwidth", type=int, help="Bartlett bandwidth (default floor(N^(1/3)))")
    c.add_argument("--out", required=True, help="report CSV")

    hi = sub.add_parser("histogram", help="standardized F_N(x) - F(x) draws")
    hi.add_argument("--hurst", type=float, required=True, help="Hurst index in (0.5, 1)")
    hi.add_argument("--length", type=int, required=True, help="sample size N")
    hi.add_argument("--reps", type=int, required=True, help="number of draws")
    hi.add_argument("--x", type=float, default=0.0, help="evaluation point (default 0)")
    hi.add_argument("--seed", type=_seed, required=True, help="base seed; draw r uses seed ^ r")
    hi.add_argument("--normalizer", choices=("exact", "asymptotic"), default="exact", help="d_N variant")
    hi.add_argument("--out", required=True, help="output CSV (rep,value)")
    return p


def _model_for(hurst: float, transform: str) -> LrdModel:
    return LrdModel(hurst, TRANSFORMS[transform])


def _cmd_generate(a):
    series = simulate(LrdModel(a.hurst, TRANSFORMS[a.transform]), a.length, a.seed)
    csvio.write_series(series, a.out)


def _cmd_hurst(a):
    series = csvio.read_series(a.input)
    print(csvio.fmt(rs_hurst(series.values)))


def _cmd_lrv(a):
    series = csvio.read_series(a.input)
    n = len(series)
    b = a.bandwidth or default_bandwidth(n)
    if a.x is None:
        est = bartlett_lrv(series.values, b)
    else:
        h, _ = resolve_hurst(series, a.hurst)
        _, _, resid = decompose(series, _model_for(h, a.transform), [a.x])
        est = bartlett_lrv(resid[:, 0], b)
    print(f"{csvio.fmt(est.value)},{est.bandwidth}")


def _cmd_band(a):
    series = csvio.read_series(a.input)
    grid = parse_grid(a.grid)
    h, estimated = resolve_hurst(series, a.hurst)
    model = _model_for(h, a.transform)
    if a.method == "asymptotic":
        reg = asymptotic_band(series, h, a.alpha, grid, model)
    else:
        reg = hoa_band(series, model, a.alpha, grid, bandwidth=a.bandwidth, hurst_estimated=estimated)
    csvio.write_region(reg, a.out)


def _cmd_quantile(a):
    series = csvio.read_series(a.input)
    h, estimated = resolve_hurst(series, a.hurst)
    model = _model_for(h, a.transform)
    if a.method == "asymptotic":
        reg = asymptotic_quantile_ci(series, h, a.alpha, a.p, model)
    else:
        reg = hoa_quantile_ci(series, model, a.alpha, a.p, bandwidth=a.bandwidth, hurst_estimated=estimated)
    csvio.write_region(reg, a.out)


def _cmd_coverage(a):
    if a.p is not None:
        target, points = "quantile", [float(v) for v in a.p.split(",")]
    else:
        target, points = "band", parse_grid(a.grid)
    config = ExperimentConfig(
        hurst_grid=tuple(parse_grid(a.hurst_grid)),
        lengths=tuple(_int_list(a.length)),
        reps=a.reps,
        alpha=a.alpha,
        target=target,
        points=tuple(points),
        hurst_mode=a.hurst_mode,
        base_seed=a.seed,
        transform=a.transform,
        bandwidth=a.bandwidth,
    )
    report = run_coverage_experiment(config, threads=a.threads)
    write_report_csv(report, a.out)
    for r in report.rows:
        if r.unreliable:
            print(
                f"warning: H={r.hurst:g} N={r.N} {r.method} point={r.point:g}: "
                f"{r.reps_failed}/{r.reps} replications failed",
                file=sys.stderr,
            )


def _cmd_histogram(a):
    samples = sampling_distribution_samples(
        LrdModel(a.hurst), a.length, a.reps, a.x, a.seed, normalizer=a.normalizer
    )
    csvio.write_histogram(samples, a.out)


COMMANDS = {
    "generate": _cmd_generate,
    "hurst": _cmd_hurst,
    "lrv": _cmd_lrv,
    "band": _cmd_band,
    "quantile-ci": _cmd_quantile,
    "coverage": _cmd_coverage,
    "histogram": _cmd_histogram,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (UsageError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except LrdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
