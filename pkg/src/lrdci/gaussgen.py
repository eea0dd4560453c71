"""Long-range dependent Gaussian and subordinated Gaussian series.

Fractional Gaussian noise is synthesized exactly by circulant embedding
(Davies-Harte).  All randomness goes through ``numpy.random.PCG64`` seeded
with a 64-bit unsigned integer; replication ``r`` of an experiment with base
seed ``s`` uses seed ``s ^ r`` (see :func:`replication_seed`).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import DomainError, GenerationError

SEED_MAX = 2**64 - 1
EIGEN_TOL = 1e-8
_PROBE = np.linspace(-6.0, 6.0, 121)


# ---------------------------------------------------------------------------
# transforms and models


@dataclass(frozen=True)
class Transform:
    """A strictly monotone bijection ``G`` together with its inverse."""

    name: str
    forward: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]
    increasing: bool = True

    def __call__(self, y):
        return self.forward(y)

    def check(self) -> None:
        """Probe monotonicity and the inverse on a driver grid.

        Raises DomainError if ``G`` is not strictly monotone in the declared
        direction or if ``G(G^{-1}(y))`` deviates from ``y`` by more than
        1e-10 (relative to ``max(1, |y|)``).
        """
        with np.errstate(all="ignore"):
            y = np.asarray(self.forward(_PROBE), dtype=float)
            back = np.asarray(self.forward(self.inverse(y)), dtype=float)
        if not np.all(np.isfinite(y)):
            raise DomainError(f"transform {self.name!r} is not finite on the probe grid")
        steps = np.diff(y)
        ok = np.all(steps > 0) if self.increasing else np.all(steps < 0)
        if not ok:
            direction = "increasing" if self.increasing else "decreasing"
            raise DomainError(f"transform {self.name!r} is not strictly {direction}")
        err = np.abs(back - y) / np.maximum(1.0, np.abs(y))
        if np.max(err) > 1e-10:
            raise DomainError(
                f"transform {self.name!r}: inverse mismatch {np.max(err):.3g} on probe grid"
            )


def _ident(y):
    return np.asarray(y, dtype=float)


def _neg(y):
    return -np.asarray(y, dtype=float)


IDENTITY = Transform("identity", _ident, _ident, True)
EXPONENTIAL = Transform("exp", np.exp, np.log, True)
NEGATION = Transform("negation", _neg, _neg, False)

TRANSFORMS = {t.name: t for t in (IDENTITY, EXPONENTIAL, NEGATION)}


def affine(scale: float, shift: float = 0.0) -> Transform:
    if scale == 0:
        raise DomainError("affine transform needs a non-zero scale")
    return Transform(
        f"affine({scale:g},{shift:g})",
        lambda y: scale * np.asarray(y, dtype=float) + shift,
        lambda x: (np.asarray(x, dtype=float) - shift) / scale,
        scale > 0,
    )


@dataclass(frozen=True)
class LrdModel:
    """Subordinated fGn model ``X_n = G(xi_n)`` with slowly varying part 1."""

    hurst: float
    transform: Transform = IDENTITY

    def __post_init__(self):
        if not 0.5 < self.hurst < 1.0:
            raise DomainError(f"hurst must lie in (0.5, 1), got {self.hurst}")
        self.transform.check()

    @property
    def memory_d(self) -> float:
        return 2.0 - 2.0 * self.hurst

    @property
    def increasing(self) -> bool:
        return self.transform.increasing

    def marginal_cdf(self, x):
        """``P(G(xi) <= x)``; points where the inverse is undefined lie below the support."""
        with np.errstate(invalid="ignore", divide="ignore"):
            z = np.asarray(self.transform.inverse(np.asarray(x, dtype=float)), dtype=float)
        out = ndtr(z) if self.increasing else 1.0 - ndtr(z)
        return _scalar_or_array(np.where(np.isnan(z), 0.0, out), x)

    def marginal_density(self, x, h: float = 1e-5):
        """Density of ``G(xi)``; the inverse is differentiated numerically."""
        x = np.asarray(x, dtype=float)
        inv = self.transform.inverse
        z = inv(x)
        step = h * np.maximum(1.0, np.abs(x))
        slope = np.abs(inv(x + step) - inv(x - step)) / (2 * step)
        if self.transform is IDENTITY or self.transform is NEGATION:
            slope = np.ones_like(x)
        return _scalar_or_array(np.exp(-0.5 * z * z) / np.sqrt(2 * np.pi) * slope, x)

    def marginal_quantile(self, p):
        p = np.asarray(p, dtype=float)
        if np.any((p <= 0) | (p >= 1)):
            raise DomainError("p must lie in (0, 1)")
        z = ndtri(p) if self.increasing else ndtri(1.0 - p)
        return _scalar_or_array(self.transform.forward(z), p)


def _scalar_or_array(out, like):
    out = np.asarray(out, dtype=float)
    return float(out) if np.ndim(like) == 0 else out


@dataclass
class TimeSeries:
    """Observed values plus, when known, the latent Gaussian driver."""

    values: np.ndarray
    driver: Optional[np.ndarray] = None
    model: Optional[LrdModel] = None
    seed: Optional[int] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).ravel()
        if self.values.size < 1:
            raise DomainError("a time series needs at least one observation")
        if self.driver is not None:
            self.driver = np.asarray(self.driver, dtype=float).ravel()
            if self.driver.shape != self.values.shape:
                raise DomainError("driver and values differ in length")
            if self.model is not None:
                expect = self.model.transform.forward(self.driver)
                tol = 1e-12 * np.maximum(1.0, np.abs(expect))
                if np.any(np.abs(expect - self.values) > tol):
                    raise DomainError("values are not the transformed driver")

    def __len__(self) -> int:
        return self.values.size


# ---------------------------------------------------------------------------
# fGn


def _check_hurst_open(hurst: float) -> None:
    if not 0.0 < hurst < 1.0:
        raise DomainError(f"hurst must lie in (0, 1), got {hurst}")


def fgn_autocovariance(hurst: float, lag):
    """Autocovariance of unit-variance fGn at integer ``lag`` (scalar or array)."""
    _check_hurst_open(hurst)
    k = np.abs(np.asarray(lag, dtype=float))
    two_h = 2.0 * hurst
    out = 0.5 * (np.abs(k + 1) ** two_h - 2 * k**two_h + np.abs(k - 1) ** two_h)
    return float(out) if np.ndim(lag) == 0 else out


@lru_cache(maxsize=64)
def _embedding_sqrt(hurst: float, length: int) -> np.ndarray:
    lags = np.arange(length + 1)
    acf = fgn_autocovariance(hurst, lags)
    row = np.concatenate([acf, acf[-2:0:-1]])
    eig = np.fft.fft(row).real
    lo = eig.min()
    if lo < -EIGEN_TOL:
        raise GenerationError(
            f"circulant embedding not PSD for H={hurst}, N={length}: min eigenvalue {lo:.3e}"
        )
    eig = np.clip(eig, 0.0, None)
    scale = np.sqrt(eig / row.size)
    scale.setflags(write=False)
    return scale


def make_rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise DomainError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.PCG64(seed))


def replication_seed(base_seed: int, rep: int) -> int:
    return (int(base_seed) ^ int(rep)) & SEED_MAX


def fgn_driver(hurst: float, length: int, seed: int) -> np.ndarray:
    """Raw fGn sample as a float array (no validation of the model)."""
    if length < 2:
        raise DomainError("length must be at least 2")
    _check_hurst_open(hurst)
    scale = _embedding_sqrt(float(hurst), int(length))
    rng = make_rng(seed)
    m = scale.size
    w = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return np.fft.fft(scale * w).real[:length]


def generate_fgn(hurst: float, length: int, seed: int) -> TimeSeries:
    """Standardized fGn of the given length; ``driver`` equals ``values``."""
    model = LrdModel(hurst)
    xi = fgn_driver(hurst, length, seed)
    return TimeSeries(values=xi, driver=xi.copy(), model=model, seed=int(seed))


def subordinate(series: TimeSeries, model: LrdModel) -> TimeSeries:
    if series.driver is None:
        raise DomainError("subordination needs the latent driver")
    model.transform.check()
    values = np.asarray(model.transform.forward(series.driver), dtype=float)
    return TimeSeries(values=values, driver=series.driver, model=model, seed=series.seed)


def simulate(model: LrdModel, length: int, seed: int) -> TimeSeries:
    xi = fgn_driver(model.hurst, length, seed)
    return TimeSeries(model.transform.forward(xi), driver=xi, model=model, seed=int(seed))


# ---------------------------------------------------------------------------
# normalizers


def _check_lrd_hurst(hurst: float) -> None:
    if not 0.5 < hurst < 1.0:
        raise DomainError(f"hurst must lie in (0.5, 1), got {hurst}")


def exact_dn(hurst: float, length: int) -> float:
    """Standard deviation of ``sum(xi_1..xi_N)`` from the exact autocovariance."""
    _check_lrd_hurst(hurst)
    if length < 1:
        raise DomainError("length must be positive")
    k = np.arange(1, length)
    var = length + 2.0 * np.sum((length - k) * fgn_autocovariance(hurst, k))
    return float(np.sqrt(var))


def asymptotic_dn(hurst: float, length: int) -> float:
    """``sqrt(H(2H-1)) * N**H``."""
    _check_lrd_hurst(hurst)
    if length < 1:
        raise DomainError("length must be positive")
    return float(np.sqrt(hurst * (2 * hurst - 1)) * length**hurst)
