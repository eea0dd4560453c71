"""Probabilists' Hermite polynomials and Hermite coefficients of indicators.

For ``X = G(xi)`` with strictly monotone ``G`` the coefficient of
``1{X <= x} - F(x)`` on ``H_l`` is

    c_l(x) = -+ H_{l-1}(G^{-1}(x)) * phi(G^{-1}(x))

(minus for increasing ``G``).  A quadrature route that only evaluates the
forward map is provided as an independent check.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, NumericError, RangeError
from .gaussgen import LrdModel, Transform

MAX_ORDER = 64
_SQRT_2PI = math.sqrt(2 * math.pi)


def std_normal_pdf(x):
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x) / _SQRT_2PI
    return float(out) if out.ndim == 0 else out


def hermite_poly(order: int, x):
    """``H_order(x)`` via the forward three-term recurrence."""
    order = int(order)
    if order < 0:
        raise DomainError("order must be non-negative")
    if order > MAX_ORDER:
        raise RangeError(f"order {order} exceeds the supported maximum {MAX_ORDER}")
    x = np.asarray(x, dtype=float)
    prev, cur = np.ones_like(x), x.copy()
    if order == 0:
        cur = prev
    for n in range(1, order):
        prev, cur = cur, x * cur - n * prev
    return float(cur) if cur.ndim == 0 else cur


def hermite_matrix(max_order: int, x) -> np.ndarray:
    """Columns ``H_0(x) .. H_max_order(x)`` for a 1-d array ``x``."""
    if max_order > MAX_ORDER:
        raise RangeError(f"order {max_order} exceeds the supported maximum {MAX_ORDER}")
    x = np.asarray(x, dtype=float).ravel()
    out = np.empty((x.size, max_order + 1))
    out[:, 0] = 1.0
    if max_order >= 1:
        out[:, 1] = x
    for n in range(1, max_order):
        out[:, n + 1] = x * out[:, n] - n * out[:, n - 1]
    return out


def hermite_coeff_closed(transform_inverse, increasing: bool, order: int, x):
    """Closed-form ``c_l(x)`` for a strictly monotone transform."""
    if order < 1:
        raise DomainError("order must be at least 1")
    z = np.asarray(transform_inverse(np.asarray(x, dtype=float)), dtype=float)
    val = hermite_poly(order - 1, z) * std_normal_pdf(z)
    val = -val if increasing else val
    return float(val) if np.ndim(val) == 0 else val


def hermite_coeff_quadrature(
    transform, order: int, x: float, lo: float = -10.0, hi: float = 10.0, tol: float = 1e-10
) -> float:
    """``E[1{G(xi) <= x} H_l(xi)]`` by adaptive quadrature over ``[lo, hi]``.

    Only the forward map is evaluated: the boundary of ``{y : G(y) <= x}``
    is located by root bracketing, so this does not share code with the
    closed form.
    """
    if order < 1:
        raise DomainError("order must be at least 1")
    g = transform.forward if isinstance(transform, Transform) else transform

    def below(y):
        return float(g(y)) <= x

    def integrand(y):
        return hermite_poly(order, y) * std_normal_pdf(y)

    in_lo, in_hi = below(lo), below(hi)
    if in_lo and in_hi:
        pieces = [(lo, hi)]
    elif not in_lo and not in_hi:
        return 0.0
    else:
        with np.errstate(all="ignore"):
            cut = optimize.brentq(lambda y: float(g(y)) - x, lo, hi, xtol=1e-14, rtol=1e-15)
        pieces = [(lo, cut)] if in_lo else [(cut, hi)]
    total = 0.0
    for a, b in pieces:
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad(integrand, a, b, epsabs=tol, epsrel=tol, limit=200)
            except integrate.IntegrationWarning as exc:
                raise NumericError(f"quadrature did not converge: {exc}") from exc
        if err > 1e-8:
            raise NumericError(f"quadrature error estimate {err:.2e} above 1e-8")
        total += val
    return total


def lower_order_count(hurst: float) -> int:
    """Number of Hermite orders in the long-memory block, ``floor(1/D)``.

    When ``1/D`` is an integer the boundary order belongs to this block.
    """
    if not 0.5 < hurst < 1.0:
        raise DomainError(f"hurst must lie in (0.5, 1), got {hurst}")
    inv_d = 1.0 / (2.0 - 2.0 * hurst)
    return max(1, int(math.floor(inv_d + 1e-9)))


@dataclass(frozen=True)
class HermiteCoefficientTable:
    x_grid: np.ndarray
    max_order: int
    coeffs: np.ndarray  # shape (max_order, len(x_grid)); row l-1 holds c_l
    increasing: bool

    @property
    def orders(self) -> range:
        return range(1, self.max_order + 1)

    def scaled(self) -> np.ndarray:
        """Rows ``c_l(x) / l!`` ready to multiply ``H_l(xi)``."""
        fact = np.array([math.factorial(l) for l in self.orders], dtype=float)
        return self.coeffs / fact[:, None]


def coefficient_table(model: LrdModel, x_grid, max_order: int) -> HermiteCoefficientTable:
    """Closed-form coefficient table; enforces the Bessel bound."""
    if max_order < 1:
        raise DomainError("max_order must be at least 1")
    if max_order > MAX_ORDER:
        raise RangeError(f"order {max_order} exceeds the supported maximum {MAX_ORDER}")
    x_grid = np.sort(np.atleast_1d(np.asarray(x_grid, dtype=float)))
    with np.errstate(invalid="ignore", divide="ignore"):
        z = np.asarray(model.transform.inverse(x_grid), dtype=float)
    z = np.where(np.isnan(z), -np.inf if model.increasing else np.inf, z)
    zf = np.where(np.isfinite(z), z, 0.0)
    herm = hermite_matrix(max_order - 1, zf).T
    pdf = np.where(np.isfinite(z), std_normal_pdf(zf), 0.0)
    coeffs = herm * pdf[None, :]
    if model.increasing:
        coeffs = -coeffs
    table = HermiteCoefficientTable(x_grid, max_order, coeffs, model.increasing)
    fx = np.asarray(model.marginal_cdf(x_grid))
    fx = np.nan_to_num(fx, nan=0.0)
    energy = np.sum(table.coeffs * table.scaled(), axis=0)
    if np.any(energy > fx * (1 - fx) + 1e-8):
        raise NumericError("Hermite coefficient table violates the Bessel bound")
    return table
