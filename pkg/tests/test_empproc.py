import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from lrdci.errors import DomainError
from lrdci.gaussgen import EXPONENTIAL, IDENTITY, LrdModel, TimeSeries, exact_dn, simulate
from lrdci.empproc import (
    decompose,
    empirical_cdf,
    empirical_quantile,
    higher_order_residuals,
    lower_order_mean,
    lower_order_terms,
    recover_driver,
    sampling_distribution_samples,
    sequential_empirical_process,
)
from lrdci.hermite import hermite_coeff_quadrature, hermite_poly, std_normal_pdf

finite = st.floats(-1e6, 1e6, allow_nan=False)


class TestEmpiricalCdf:
    @pytest.mark.parametrize("x,expected", [(2, 2 / 3), (0.5, 0.0), (3, 1.0)])
    def test_examples(self, x, expected):
        assert empirical_cdf([1, 2, 3], x) == expected

    def test_empty(self):
        with pytest.raises(DomainError):
            empirical_cdf([], 0.0)

    @given(st.lists(finite, min_size=1, max_size=40), finite, finite)
    def test_monotone_step(self, xs, a, b):
        lo, hi = sorted((a, b))
        fa, fb = empirical_cdf(xs, lo), empirical_cdf(xs, hi)
        assert 0.0 <= fa <= fb <= 1.0
        assert fa * len(xs) == pytest.approx(round(fa * len(xs)))

    def test_vector_argument(self):
        np.testing.assert_array_equal(empirical_cdf([1, 2, 3], [0, 1, 2.5, 9]), [0, 1 / 3, 2 / 3, 1])


class TestEmpiricalQuantile:
    @pytest.mark.parametrize("xs,p,expected", [((3, 1, 2), 0.5, 2), ((3, 1, 2), 0.34, 2), ((5,), 0.99, 5)])
    def test_examples(self, xs, p, expected):
        assert empirical_quantile(xs, p) == expected

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.5])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            empirical_quantile([1.0, 2.0], p)

    @given(st.lists(finite, min_size=1, max_size=40), st.floats(0.001, 0.999))
    def test_generalized_inverse(self, xs, p):
        q = empirical_quantile(xs, p)
        assert q in xs
        assert empirical_cdf(xs, q) >= p - 1e-12
        below = [v for v in xs if v < q]
        if below:
            assert empirical_cdf(xs, max(below)) < p + 1e-12

    def test_exact_multiple_of_grid(self):
        # 0.7 * 10 is 7.000000000000001 in floating point; k must still be 7
        assert empirical_quantile(np.arange(1.0, 11.0), 0.7) == 7.0


class TestSequentialProcess:
    def test_empty_sum(self):
        assert sequential_empirical_process([0.3, 0.8], lambda x: 0.5, 0.0, 0.1) == 0.0

    def test_two_point_uniform(self):
        uniform = lambda x: min(max(x, 0.0), 1.0)
        assert sequential_empirical_process([0.1, 0.9], uniform, 1.0, 0.5) == pytest.approx(0.0)

    def test_far_right(self):
        xs = np.random.default_rng(0).normal(size=50)
        assert sequential_empirical_process(xs, stats.norm.cdf, 1.0, 1e6) == 0.0

    def test_partial_sum_counts_prefix(self):
        xs = [0.1, 0.9, 0.2, 0.3]
        # floor(4 * 0.5) = 2 terms: (1 - 0.5) + (0 - 0.5)
        assert sequential_empirical_process(xs, lambda x: 0.5, 0.5, 0.5) == 0.0
        assert sequential_empirical_process(xs, lambda x: 0.5, 0.25, 0.5) == 0.5

    def test_domain(self):
        with pytest.raises(DomainError):
            sequential_empirical_process([1.0], lambda x: 0.5, 1.2, 0.0)


class TestLowerOrder:
    def test_zero_driver(self):
        assert lower_order_mean(np.zeros(10), LrdModel(0.55), 0.7) == 0.0

    def test_antisymmetric_driver(self):
        assert lower_order_mean([1.0, -1.0], LrdModel(0.55), 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_term_by_term_oracle(self):
        oracle = sum(
            hermite_coeff_quadrature(IDENTITY, l, 0.0) / math.factorial(l) * hermite_poly(l, 1.0)
            for l in range(1, 11)
        )
        assert lower_order_mean([1.0], LrdModel(0.95), 0.0) == pytest.approx(oracle, abs=1e-8)

    def test_single_order_is_first_hermite_term(self):
        xi = np.array([0.3, -1.2, 2.0])
        terms = lower_order_terms(xi, LrdModel(0.6), [0.5, -0.4])
        expected = -std_normal_pdf(np.array([0.5, -0.4]))[None, :] * xi[:, None]
        np.testing.assert_allclose(terms, expected, rtol=1e-14)

    def test_grid_order_preserved(self):
        xi = np.linspace(-2, 2, 7)
        model = LrdModel(0.9)
        a = lower_order_terms(xi, model, [1.0, -1.0, 0.0])
        b = lower_order_terms(xi, model, [-1.0, 0.0, 1.0])
        np.testing.assert_array_equal(a, b[:, [2, 0, 1]])

    def test_missing_driver(self):
        with pytest.raises(DomainError):
            lower_order_terms(None, LrdModel(0.7), [0.0])


class TestResiduals:
    def test_zero_driver(self):
        series = TimeSeries(np.zeros(8), np.zeros(8), LrdModel(0.55))
        dec = higher_order_residuals(series, LrdModel(0.55), 0.0)
        np.testing.assert_array_equal(dec.residuals, 0.5)
        assert dec.truncation == 1
        assert dec.d_param == pytest.approx(0.9)

    def test_far_left_point(self):
        series = simulate(LrdModel(0.8), 300, 5)
        dec = higher_order_residuals(series, LrdModel(0.8), -8.0)
        _, lower, _ = decompose(series, LrdModel(0.8), [-8.0])
        fx = stats.norm.cdf(-8.0)
        assert np.all(np.abs(dec.residuals) <= fx + np.abs(lower[:, 0]) + 1e-15)

    def test_iid_limit_mean(self):
        series = simulate(LrdModel(0.551), 4096, 11)
        dec = higher_order_residuals(series, LrdModel(0.551), 0.0)
        assert abs(dec.residuals.mean()) < 0.05

    def test_requires_model(self):
        with pytest.raises(DomainError):
            higher_order_residuals(simulate(LrdModel(0.7), 50, 1), None, 0.0)

    @given(st.integers(0, 2**32), st.sampled_from([0.6, 0.75, 0.9, 0.95]))
    @settings(max_examples=20, deadline=None)
    def test_decomposition_identity(self, seed, h):
        model = LrdModel(h)
        series = simulate(model, 64, seed)
        grid = np.linspace(-2.5, 2.5, 11)
        centered, lower, resid = decompose(series, model, grid)
        indicator = (series.values[:, None] <= grid).astype(float)
        assert np.all(centered - lower - resid == 0.0)
        np.testing.assert_allclose(centered, indicator - stats.norm.cdf(grid), atol=1e-15)

    def test_driver_recovered_through_inverse(self):
        model = LrdModel(0.8, EXPONENTIAL)
        series = simulate(model, 40, 3)
        bare = TimeSeries(series.values, None, model)
        np.testing.assert_allclose(recover_driver(bare), series.driver, rtol=1e-12, atol=1e-12)
        with pytest.raises(DomainError):
            recover_driver(TimeSeries(series.values))


def test_reduction_principle():
    """Remainder after the first Hermite term shrinks relative to d_N."""
    h, reps = 0.9, 200
    model = LrdModel(h)
    phi0 = std_normal_pdf(0.0)
    variances = []
    for n in (2**8, 2**10, 2**12):
        dn = exact_dn(h, n)
        vals = []
        for r in range(reps):
            s = simulate(model, n, 7000 + r)
            e_n = np.sum(s.values <= 0.0) - 0.5 * n
            vals.append((e_n + phi0 * s.driver.sum()) / dn)
        variances.append(np.var(vals, ddof=1))
    assert variances[0] > variances[1] > variances[2]


class TestSamplingDistribution:
    def test_deterministic(self):
        a = sampling_distribution_samples(LrdModel(0.7), 100, 1, 0.0, 42)
        b = sampling_distribution_samples(LrdModel(0.7), 100, 1, 0.0, 42)
        assert a.shape == (1,)
        assert a[0] == b[0]

    def test_rep_zero_matches_simulate(self):
        model = LrdModel(0.7)
        s = simulate(model, 100, 42)
        expected = 100 / exact_dn(0.7, 100) * (np.mean(s.values <= 0.0) - 0.5) / std_normal_pdf(0.0)
        got = sampling_distribution_samples(model, 100, 1, 0.0, 42)[0]
        assert got == pytest.approx(expected, rel=1e-12)

    def test_kolmogorov_distance_grows_with_memory(self):
        ks = {}
        for h in (0.55, 0.95):
            draws = sampling_distribution_samples(LrdModel(h), 1000, 2000, 0.0, 2024)
            ks[h] = stats.kstest(draws, "norm").statistic
        assert ks[0.55] < 0.08
        assert ks[0.95] > ks[0.55]

    def test_bad_reps(self):
        with pytest.raises(DomainError):
            sampling_distribution_samples(LrdModel(0.7), 100, 0, 0.0, 1)
