"""Sample autocovariance, Bartlett long-run variance, and R/S Hurst estimation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EstimationError

RS_MIN_BLOCK = 16
RS_CLAMP = (0.01, 0.99)


def sample_autocovariance(series, lag: int) -> float:
    y = np.asarray(series, dtype=float).ravel()
    n = y.size
    if n < 2:
        raise DomainError("need at least two observations")
    j = abs(int(lag))
    if j >= n:
        raise DomainError(f"|lag| must be below N={n}, got {lag}")
    c = y - y.mean()
    return float(np.dot(c[: n - j], c[j:]) / n)


def _autocovariances(y: np.ndarray, max_lag: int) -> np.ndarray:
    """Biased autocovariances at lags ``0..max_lag`` along axis 0."""
    n = y.shape[0]
    c = y - y.mean(axis=0)
    out = np.empty((max_lag + 1,) + y.shape[1:])
    for j in range(max_lag + 1):
        out[j] = np.sum(c[: n - j] * c[j:], axis=0) / n
    return out


@dataclass(frozen=True)
class LrvEstimate:
    value: float
    bandwidth: int
    lags_used: range
    truncated: bool = False


def bartlett_weights(bandwidth: int) -> np.ndarray:
    """Weights ``K(j/b)`` for ``j = 0..b-1``; ``K(j/b) = 0`` for ``|j| >= b``."""
    j = np.arange(bandwidth)
    return 1.0 - j / bandwidth


def _check_bandwidth(n: int, bandwidth: int) -> None:
    if not 1 <= bandwidth <= n - 1:
        raise DomainError(f"bandwidth must lie in [1, {n - 1}], got {bandwidth}")


def bartlett_lrv(series, bandwidth: int) -> LrvEstimate:
    y = np.asarray(series, dtype=float).ravel()
    if y.size < 2:
        raise DomainError("need at least two observations")
    bandwidth = int(bandwidth)
    _check_bandwidth(y.size, bandwidth)
    value = float(bartlett_lrv_columns(y[:, None], bandwidth)[0])
    truncated = value < 0
    return LrvEstimate(max(value, 0.0), bandwidth, range(-(bandwidth - 1), bandwidth), truncated)


def bartlett_lrv_columns(y: np.ndarray, bandwidth: int) -> np.ndarray:
    """Untruncated Bartlett estimates for every column of ``y`` (shape ``(N, k)``)."""
    y = np.asarray(y, dtype=float)
    _check_bandwidth(y.shape[0], bandwidth)
    gam = _autocovariances(y, bandwidth - 1)
    w = bartlett_weights(bandwidth)
    w = np.concatenate([[1.0], 2.0 * w[1:]])
    return np.tensordot(w, gam, axes=(0, 0))


def default_bandwidth(length: int) -> int:
    """``floor(length ** (1/3))`` computed in exact integer arithmetic."""
    length = int(length)
    if length < 8:
        raise DomainError(f"length must be at least 8, got {length}")
    b = int(round(length ** (1.0 / 3.0)))
    while b**3 > length:
        b -= 1
    while (b + 1) ** 3 <= length:
        b += 1
    return max(1, b)


def rs_block_sizes(length: int) -> list[int]:
    """Dyadic sizes ``16, 32, ..`` up to ``length // 2``.

    Series too short for two dyadic sizes also use the whole series as a
    block so a slope can be fitted.
    """
    sizes, m = [], RS_MIN_BLOCK
    while m <= length // 2:
        sizes.append(m)
        m *= 2
    if len(sizes) == 1:
        sizes.append(length)
    return sizes


def rescaled_ranges(series, block: int) -> np.ndarray:
    """R/S of each complete non-overlapping block; zero-variance blocks dropped."""
    y = np.asarray(series, dtype=float).ravel()
    k = y.size // block
    blocks = y[: k * block].reshape(k, block)
    dev = blocks - blocks.mean(axis=1, keepdims=True)
    path = np.cumsum(dev, axis=1)
    r = path.max(axis=1) - path.min(axis=1)
    s = blocks.std(axis=1)
    scale = np.maximum(np.abs(blocks).max(axis=1), 1.0)
    keep = s > 1e-12 * scale
    return r[keep] / s[keep]


def rs_hurst(series) -> float:
    """R/S estimate of the Hurst exponent over dyadic block sizes ``16..N/2``.

    The log of the block-averaged rescaled range is regressed on the log block
    size by least squares; the slope is clipped to ``[0.01, 0.99]``.
    """
    y = np.asarray(series, dtype=float).ravel()
    if y.size < 2 * RS_MIN_BLOCK:
        raise DomainError(f"R/S needs at least {2 * RS_MIN_BLOCK} observations")
    logm, logrs = [], []
    for m in rs_block_sizes(y.size):
        rs = rescaled_ranges(y, m)
        if rs.size:
            logm.append(np.log(m))
            logrs.append(np.log(rs.mean()))
    if len(logm) < 2:
        raise EstimationError("R/S: fewer than two block sizes with non-degenerate blocks")
    slope = np.polyfit(np.array(logm), np.array(logrs), 1)[0]
    return float(np.clip(slope, *RS_CLAMP))
