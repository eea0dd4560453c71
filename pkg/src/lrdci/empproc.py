"""Empirical CDF/quantiles, the sequential empirical process, and the
split of ``1{X_n <= x} - F(x)`` into a long-memory block ``L_n(x)`` and the
short-memory remainder ``S_n(x)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .gaussgen import (
    LrdModel,
    TimeSeries,
    asymptotic_dn,
    exact_dn,
    fgn_driver,
    replication_seed,
)
from .hermite import coefficient_table, hermite_matrix, lower_order_count


def _values(series) -> np.ndarray:
    vals = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=float)
    vals = np.ravel(vals)
    if vals.size == 0:
        raise DomainError("empty series")
    return vals


def empirical_cdf(series, x):
    vals = np.sort(_values(series))
    counts = np.searchsorted(vals, np.asarray(x, dtype=float), side="right")
    out = counts / vals.size
    return float(out) if np.ndim(x) == 0 else out


def empirical_quantile(series, p: float) -> float:
    """Smallest sample point ``q`` with ``F_N(q) >= p``."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    vals = np.sort(_values(series))
    # round away representation noise such as 0.7 * 10 = 7.000000000000001
    k = max(1, math.ceil(round(p * vals.size, 9)))
    return float(vals[k - 1])


def sequential_empirical_process(series, cdf: Callable, t: float, x: float) -> float:
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    vals = _values(series)
    m = int(math.floor(vals.size * t))
    if m == 0:
        return 0.0
    return float(np.sum(vals[:m] <= x) - m * float(cdf(x)))


def recover_driver(series: TimeSeries, model: Optional[LrdModel] = None) -> np.ndarray:
    """The latent Gaussian driver, inverting ``G`` when it is not stored."""
    if series.driver is not None:
        return series.driver
    model = model or series.model
    if model is None:
        raise DomainError("driver missing and no model to recover it from")
    return np.asarray(model.transform.inverse(series.values), dtype=float)


def lower_order_terms(driver, model: LrdModel, x_grid, max_order: Optional[int] = None) -> np.ndarray:
    """Matrix ``L_n(x)`` with rows ``n`` and columns over ``x_grid``.

    ``x_grid`` is used in the given order (not sorted).
    """
    if driver is None:
        raise DomainError("lower-order terms need the latent driver")
    xi = np.asarray(driver, dtype=float).ravel()
    order = lower_order_count(model.hurst) if max_order is None else int(max_order)
    x_grid = np.atleast_1d(np.asarray(x_grid, dtype=float))
    idx = np.argsort(x_grid, kind="stable")
    table = coefficient_table(model, x_grid, order)
    scaled = np.empty_like(table.scaled())
    scaled[:, idx] = table.scaled()
    herm = hermite_matrix(order, xi)[:, 1:]
    return herm @ scaled


def lower_order_mean(driver, model: LrdModel, x: float) -> float:
    """``(1/N) sum_n L_n(x)``."""
    return float(lower_order_terms(driver, model, [x]).mean())


@dataclass(frozen=True)
class HermiteDecomposition:
    x: float
    lower_mean: float
    residuals: np.ndarray
    truncation: int
    hurst: float
    d_param: float


def decompose(series: TimeSeries, model: LrdModel, x_grid):
    """Indicator, lower-order and residual matrices over ``x_grid``.

    Returns ``(centered, lower, residual)``, each of shape ``(N, len(x_grid))``,
    with ``residual = centered - lower`` exactly.
    """
    xi = recover_driver(series, model)
    x_grid = np.atleast_1d(np.asarray(x_grid, dtype=float))
    fx = np.asarray(model.marginal_cdf(x_grid), dtype=float)
    centered = (series.values[:, None] <= x_grid[None, :]) - fx[None, :]
    lower = lower_order_terms(xi, model, x_grid)
    return centered, lower, centered - lower


def higher_order_residuals(series: TimeSeries, model: Optional[LrdModel], x: float) -> HermiteDecomposition:
    if model is None:
        raise DomainError("the marginal distribution is needed for the residuals")
    _, lower, resid = decompose(series, model, [x])
    return HermiteDecomposition(
        x=float(x),
        lower_mean=float(lower[:, 0].mean()),
        residuals=resid[:, 0].copy(),
        truncation=lower_order_count(model.hurst),
        hurst=model.hurst,
        d_param=model.memory_d,
    )


def sampling_distribution_samples(
    model: LrdModel, length: int, reps: int, x: float, seed: int, normalizer: str = "exact"
) -> np.ndarray:
    """Draws of ``(N/d_N) (F_N(x) - F(x)) / |c_1(x)|`` over ``reps`` replications.

    ``normalizer`` picks ``d_N``: ``"exact"`` (the standard deviation of the
    driver sum, under which the limit is standard normal) or ``"asymptotic"``.
    Replication ``r`` uses seed ``seed ^ r``.
    """
    if reps < 1:
        raise DomainError("reps must be at least 1")
    dn = exact_dn(model.hurst, length) if normalizer == "exact" else asymptotic_dn(model.hurst, length)
    c1 = abs(coefficient_table(model, [x], 1).coeffs[0, 0])
    if c1 == 0:
        raise DomainError(f"first Hermite coefficient vanishes at x={x}")
    fx = float(model.marginal_cdf(x))
    out = np.empty(reps)
    for r in range(reps):
        xi = fgn_driver(model.hurst, length, replication_seed(seed, r))
        values = model.transform.forward(xi)
        out[r] = (length / dn) * (np.mean(values <= x) - fx) / c1
    return out
