"""Confidence bands for ``F(x)`` and intervals for quantiles ``F^{-1}(p)``.

Two constructions are offered for each target:

* ``asymptotic``: the long-memory limit of the empirical process, with
  half-width ``(d_N/N) |c_1(x)| z``;
* ``hoa``: the higher-order approximation, centred at ``F_N(x) - Lbar_N(x)``
  with half-width ``sigma(x) z / sqrt(N)``, where ``sigma(x)^2`` is the
  Bartlett long-run variance of the residual series ``S_n(x)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import ndtri

from .empproc import decompose, empirical_cdf, empirical_quantile
from .errors import DomainError, EstimationError
from .estimators import bartlett_lrv_columns, default_bandwidth, rs_hurst
from .gaussgen import IDENTITY, LrdModel, TimeSeries, asymptotic_dn, exact_dn
from .hermite import hermite_coeff_closed

# R/S estimates are clipped into this window before use; outside (0.5, 1)
# neither the normalizer nor the lower-order block is defined.
ESTIMATED_HURST_RANGE = (0.51, 0.99)


@dataclass(frozen=True)
class ConfidenceRegion:
    kind: str  # "band" | "quantile-interval"
    method: str  # "asymptotic" | "hoa"
    level: float
    lower: np.ndarray
    upper: np.ndarray
    center: np.ndarray
    x_grid: Optional[np.ndarray] = None
    p: Optional[float] = None
    inputs: dict = field(default_factory=dict)

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, truth) -> np.ndarray:
        return (self.lower <= truth) & (truth <= self.upper)


def critical_value(alpha: float) -> float:
    """``z_{1 - alpha/2}``."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return float(ndtri(1.0 - alpha / 2.0))


def normalizer(hurst: float, length: int, kind: str = "asymptotic") -> float:
    if kind == "asymptotic":
        return asymptotic_dn(hurst, length)
    if kind == "exact":
        return exact_dn(hurst, length)
    raise DomainError(f"unknown normalizer {kind!r}")


def resolve_hurst(series: TimeSeries, hurst: Optional[float]) -> tuple[float, bool]:
    """``(H, estimated)``; ``hurst=None`` triggers the R/S estimate."""
    if hurst is not None:
        return float(hurst), False
    est = rs_hurst(series.values)
    return float(np.clip(est, *ESTIMATED_HURST_RANGE)), True


def _series_model(series: TimeSeries, hurst: float, model: Optional[LrdModel]) -> LrdModel:
    transform = model.transform if model is not None else (
        series.model.transform if series.model is not None else IDENTITY
    )
    return LrdModel(hurst, transform)


def estimate_sigma(series: TimeSeries, model: LrdModel, x_grid, bandwidth: Optional[int] = None):
    """Square root of the Bartlett long-run variance of ``S_n(x)`` per grid point.

    Returns ``(sigma, lower_mean)``; negative variance estimates map to 0.
    """
    _, lower, resid = decompose(series, model, x_grid)
    b = default_bandwidth(len(series)) if bandwidth is None else int(bandwidth)
    lrv = bartlett_lrv_columns(resid, b)
    return np.sqrt(np.clip(lrv, 0.0, None)), lower.mean(axis=0)


def asymptotic_band(
    series: TimeSeries,
    hurst: Optional[float],
    alpha: float,
    x_grid,
    model: Optional[LrdModel] = None,
    dn: str = "asymptotic",
) -> ConfidenceRegion:
    z = critical_value(alpha)
    h, estimated = resolve_hurst(series, hurst)
    m = _series_model(series, h, model)
    x_grid = np.atleast_1d(np.asarray(x_grid, dtype=float))
    n = len(series)
    scale = normalizer(h, n, dn) / n
    with np.errstate(divide="ignore", invalid="ignore"):
        c1 = np.abs(hermite_coeff_closed(m.transform.inverse, m.increasing, 1, x_grid))
    c1 = np.nan_to_num(c1, nan=0.0)
    center = np.asarray(empirical_cdf(series, x_grid), dtype=float)
    half = scale * c1 * z
    return ConfidenceRegion(
        kind="band",
        method="asymptotic",
        level=1.0 - alpha,
        lower=np.clip(center - half, 0.0, 1.0),
        upper=np.clip(center + half, 0.0, 1.0),
        center=center,
        x_grid=x_grid,
        inputs={"N": n, "hurst": h, "hurst_estimated": estimated, "d_N": scale * n},
    )


def hoa_band(
    series: TimeSeries,
    model: LrdModel,
    alpha: float,
    x_grid,
    sigma=None,
    bandwidth: Optional[int] = None,
    hurst_estimated: bool = False,
) -> ConfidenceRegion:
    """Band centred at ``F_N(x) - Lbar_N(x)``.

    ``sigma`` (per-x long-run standard deviations) is estimated from the
    residual series when not given.
    """
    z = critical_value(alpha)
    x_grid = np.atleast_1d(np.asarray(x_grid, dtype=float))
    n = len(series)
    est_sigma, lower_mean = estimate_sigma(series, model, x_grid, bandwidth)
    sigma = est_sigma if sigma is None else np.broadcast_to(np.asarray(sigma, dtype=float), x_grid.shape)
    bad = np.flatnonzero(~(sigma > 0))
    if bad.size:
        raise EstimationError(f"non-positive long-run variance at x={x_grid[bad[0]]:g}")
    center = np.asarray(empirical_cdf(series, x_grid), dtype=float) - lower_mean
    half = sigma * z / np.sqrt(n)
    return ConfidenceRegion(
        kind="band",
        method="hoa",
        level=1.0 - alpha,
        lower=np.clip(center - half, 0.0, 1.0),
        upper=np.clip(center + half, 0.0, 1.0),
        center=center,
        x_grid=x_grid,
        inputs={
            "N": n,
            "hurst": model.hurst,
            "hurst_estimated": hurst_estimated,
            "sigma": np.array(sigma, dtype=float),
        },
    )


def _quantile_point(model: LrdModel, p: float) -> tuple[float, float]:
    q = float(model.marginal_quantile(p))
    dens = float(model.marginal_density(q))
    if not dens > 0:
        raise DomainError(f"marginal density vanishes at the {p}-quantile")
    return q, dens


def asymptotic_quantile_ci(
    series: TimeSeries,
    hurst: Optional[float],
    alpha: float,
    p: float,
    model: Optional[LrdModel] = None,
    dn: str = "asymptotic",
) -> ConfidenceRegion:
    z = critical_value(alpha)
    h, estimated = resolve_hurst(series, hurst)
    m = _series_model(series, h, model)
    q, dens = _quantile_point(m, p)
    n = len(series)
    c1 = abs(hermite_coeff_closed(m.transform.inverse, m.increasing, 1, q))
    half = normalizer(h, n, dn) / n * c1 / dens * z
    center = empirical_quantile(series, p)
    return ConfidenceRegion(
        kind="quantile-interval",
        method="asymptotic",
        level=1.0 - alpha,
        lower=np.array(center - half),
        upper=np.array(center + half),
        center=np.array(center),
        p=p,
        inputs={"N": n, "hurst": h, "hurst_estimated": estimated},
    )


def hoa_quantile_ci(
    series: TimeSeries,
    model: LrdModel,
    alpha: float,
    p: float,
    sigma_at_q: Optional[float] = None,
    bandwidth: Optional[int] = None,
    hurst_estimated: bool = False,
) -> ConfidenceRegion:
    """Interval ``F_N^{-1}(p) + (Lbar_N(q) + sigma(q) z / sqrt(N)) / f(q)``."""
    z = critical_value(alpha)
    q, dens = _quantile_point(model, p)
    n = len(series)
    est_sigma, lower_mean = estimate_sigma(series, model, [q], bandwidth)
    sigma = float(est_sigma[0]) if sigma_at_q is None else float(sigma_at_q)
    if not sigma > 0:
        raise EstimationError(f"non-positive long-run variance at the {p}-quantile")
    base = empirical_quantile(series, p)
    shift = float(lower_mean[0]) / dens
    half = sigma * z / np.sqrt(n) / dens
    center = base + shift
    return ConfidenceRegion(
        kind="quantile-interval",
        method="hoa",
        level=1.0 - alpha,
        lower=np.array(center - half),
        upper=np.array(center + half),
        center=np.array(center),
        p=p,
        inputs={"N": n, "hurst": model.hurst, "hurst_estimated": hurst_estimated, "sigma": sigma},
    )
