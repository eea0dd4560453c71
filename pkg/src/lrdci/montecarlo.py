"""Monte Carlo coverage study for bands and quantile intervals.

Replication ``r`` of every cell uses seed ``base_seed ^ r``; the same seed
bank is shared across the Hurst grid.  Per-replication outcomes are
aggregated in replication order, so the report does not depend on how the
work was partitioned or scheduled.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .confidence import (
    ESTIMATED_HURST_RANGE,
    asymptotic_band,
    asymptotic_quantile_ci,
    estimate_sigma,
    hoa_band,
    hoa_quantile_ci,
)
from .errors import DomainError, EstimationError, ExperimentError, GenerationError
from .estimators import rs_hurst
from .gaussgen import TRANSFORMS, LrdModel, replication_seed, simulate

METHODS = ("asymptotic", "hoa")
FAILURE_THRESHOLD = 0.05
DEFAULT_REPS = 500


def true_quantile(model: LrdModel, p: float) -> float:
    return float(model.marginal_quantile(p))


@dataclass(frozen=True)
class ExperimentConfig:
    hurst_grid: tuple
    lengths: tuple
    reps: int = DEFAULT_REPS
    alpha: float = 0.05
    target: str = "band"  # "band" over x points, or "quantile" over p points
    points: tuple = (0.0,)
    hurst_mode: str = "known"
    base_seed: int = 0
    methods: tuple = METHODS
    transform: str = "identity"
    bandwidth: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "hurst_grid", tuple(float(h) for h in self.hurst_grid))
        object.__setattr__(self, "lengths", tuple(int(n) for n in self.lengths))
        object.__setattr__(self, "points", tuple(float(x) for x in self.points))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.reps < 1:
            raise DomainError("reps must be at least 1")
        if not (self.hurst_grid and self.lengths and self.points and self.methods):
            raise DomainError("grids must be non-empty")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError("alpha must lie in (0, 1)")
        if self.target not in ("band", "quantile"):
            raise DomainError(f"unknown target {self.target!r}")
        if self.hurst_mode not in ("known", "estimated"):
            raise DomainError(f"unknown hurst mode {self.hurst_mode!r}")
        if set(self.methods) - set(METHODS):
            raise DomainError(f"methods must be drawn from {METHODS}")
        if self.transform not in TRANSFORMS:
            raise DomainError(f"unknown transform {self.transform!r}")
        if self.target == "quantile" and any(not 0 < p < 1 for p in self.points):
            raise DomainError("quantile levels must lie in (0, 1)")
        for h in self.hurst_grid:
            LrdModel(h)

    def cells(self) -> list[tuple[float, int]]:
        return [(h, n) for h in self.hurst_grid for n in self.lengths]

    def model(self, hurst: float) -> LrdModel:
        return LrdModel(hurst, TRANSFORMS[self.transform])


@dataclass
class RepOutcome:
    """Outcome of one replication of one cell, per method and point."""

    rep: int
    hurst_used: float
    covered: dict = field(default_factory=dict)
    width: dict = field(default_factory=dict)
    failed: dict = field(default_factory=dict)


def _run_rep(config: ExperimentConfig, hurst: float, length: int, rep: int) -> RepOutcome:
    k = len(config.points)
    out = RepOutcome(rep=rep, hurst_used=float("nan"))
    all_failed = {m: np.ones(k, bool) for m in config.methods}
    true_model = config.model(hurst)
    try:
        series = simulate(true_model, length, replication_seed(config.base_seed, rep))
        if config.hurst_mode == "known":
            h_used = hurst
        else:
            h_used = float(np.clip(rs_hurst(series.values), *ESTIMATED_HURST_RANGE))
    except (GenerationError, EstimationError):
        out.failed = all_failed
        out.covered = {m: np.zeros(k, bool) for m in config.methods}
        out.width = {m: np.zeros(k) for m in config.methods}
        return out
    out.hurst_used = h_used
    used_model = config.model(h_used)
    estimated = config.hurst_mode == "estimated"
    pts = np.asarray(config.points)

    if config.target == "band":
        truth = np.asarray(true_model.marginal_cdf(pts))
        x_eval = pts
    else:
        truth = np.array([true_quantile(true_model, p) for p in pts])
        x_eval = truth

    for method in config.methods:
        failed = np.zeros(k, bool)
        if method == "asymptotic":
            if config.target == "band":
                reg = asymptotic_band(series, h_used, config.alpha, pts, used_model)
                lo, hi = reg.lower, reg.upper
            else:
                regs = [asymptotic_quantile_ci(series, h_used, config.alpha, p, used_model) for p in pts]
                lo = np.array([float(r.lower) for r in regs])
                hi = np.array([float(r.upper) for r in regs])
        else:
            sigma, _ = estimate_sigma(series, used_model, x_eval, config.bandwidth)
            failed = ~(sigma > 0)
            safe = np.where(failed, 1.0, sigma)
            if config.target == "band":
                reg = hoa_band(series, used_model, config.alpha, pts, safe, config.bandwidth, estimated)
                lo, hi = reg.lower, reg.upper
            else:
                regs = [
                    hoa_quantile_ci(series, used_model, config.alpha, p, s, config.bandwidth, estimated)
                    for p, s in zip(pts, safe)
                ]
                lo = np.array([float(r.lower) for r in regs])
                hi = np.array([float(r.upper) for r in regs])
        out.covered[method] = (lo <= truth) & (truth <= hi) & ~failed
        out.width[method] = np.where(failed, 0.0, hi - lo)
        out.failed[method] = failed
    return out


def run_replications(
    config: ExperimentConfig, hurst: float, length: int, reps: Iterable[int]
) -> list[RepOutcome]:
    return [_run_rep(config, hurst, length, r) for r in reps]


def _work(args):
    config, hurst, length, reps = args
    return hurst, length, run_replications(config, hurst, length, reps)


@dataclass(frozen=True)
class CoverageRow:
    hurst: float
    N: int
    method: str
    hurst_mode: str
    point: float
    coverage: float
    mean_width: float
    reps_failed: int
    reps: int

    @property
    def unreliable(self) -> bool:
        return self.reps_failed / self.reps >= FAILURE_THRESHOLD


@dataclass
class CoverageReport:
    config: ExperimentConfig
    rows: list
    mean_hurst_used: dict = field(default_factory=dict)

    def row(self, hurst: float, length: int, method: str, point: float = None) -> CoverageRow:
        for r in self.rows:
            if (
                math.isclose(r.hurst, hurst, abs_tol=1e-12)
                and r.N == length
                and r.method == method
                and (point is None or math.isclose(r.point, point, abs_tol=1e-12))
            ):
                return r
        raise KeyError((hurst, length, method, point))

    def to_csv(self, path) -> None:
        write_report_csv(self, path)


def aggregate(config: ExperimentConfig, hurst: float, length: int, outcomes: Sequence[RepOutcome]) -> list:
    outcomes = sorted(outcomes, key=lambda o: o.rep)
    rows = []
    for method in config.methods:
        covered = np.array([o.covered[method] for o in outcomes])
        width = np.array([o.width[method] for o in outcomes])
        failed = np.array([o.failed[method] for o in outcomes])
        for j, point in enumerate(config.points):
            n_fail = int(failed[:, j].sum())
            usable = len(outcomes) - n_fail
            if usable == 0:
                raise ExperimentError(
                    f"no usable replications for H={hurst}, N={length}, {method}, point={point}"
                )
            ok = ~failed[:, j]
            rows.append(
                CoverageRow(
                    hurst=hurst,
                    N=length,
                    method=method,
                    hurst_mode=config.hurst_mode,
                    point=point,
                    coverage=int(covered[ok, j].sum()) / usable,
                    mean_width=math.fsum(width[ok, j]) / usable,
                    reps_failed=n_fail,
                    reps=len(outcomes),
                )
            )
    return rows


def _chunks(n: int, parts: int) -> list[range]:
    size = max(1, math.ceil(n / parts))
    return [range(i, min(n, i + size)) for i in range(0, n, size)]


def run_coverage_experiment(config: ExperimentConfig, threads: Optional[int] = None) -> CoverageReport:
    """Coverage and mean width for every (H, N, method, point) cell.

    ``threads`` is the number of worker processes (default: CPU count);
    the result is identical for every setting.
    """
    threads = (os.cpu_count() or 1) if threads is None else max(1, int(threads))
    results: dict = {cell: [] for cell in config.cells()}
    if threads == 1:
        for h, n in config.cells():
            results[(h, n)] = run_replications(config, h, n, range(config.reps))
    else:
        jobs = [
            (config, h, n, chunk)
            for h, n in config.cells()
            for chunk in _chunks(config.reps, threads * 4)
        ]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for h, n, outs in pool.map(_work, jobs):
                results[(h, n)].extend(outs)
    rows, used = [], {}
    for h, n in config.cells():
        outs = results[(h, n)]
        rows.extend(aggregate(config, h, n, outs))
        hs = [o.hurst_used for o in sorted(outs, key=lambda o: o.rep) if np.isfinite(o.hurst_used)]
        used[(h, n)] = math.fsum(hs) / len(hs) if hs else float("nan")
    return CoverageReport(config=config, rows=rows, mean_hurst_used=used)


REPORT_HEADER = ["hurst", "N", "method", "hurst_mode", "point", "coverage", "mean_width", "reps_failed"]


def _g(x: float) -> str:
    return f"{x:.17g}"


def write_report_csv(report: CoverageReport, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_HEADER)
        for r in report.rows:
            w.writerow(
                [_g(r.hurst), r.N, r.method, r.hurst_mode, _g(r.point), _g(r.coverage), _g(r.mean_width), r.reps_failed]
            )
