"""Confidence regions for long-range dependent time series.

Classical (asymptotic) and higher-order-approximation (HOA) confidence bands
for the marginal distribution and intervals for its quantiles, together with
the fGn simulator, Hermite machinery, estimators and Monte Carlo harness they
rely on.
"""
from .confidence import (
    ConfidenceRegion,
    asymptotic_band,
    asymptotic_quantile_ci,
    hoa_band,
    hoa_quantile_ci,
)
from .empproc import (
    HermiteDecomposition,
    decompose,
    empirical_cdf,
    empirical_quantile,
    higher_order_residuals,
    lower_order_mean,
    sampling_distribution_samples,
    sequential_empirical_process,
)
from .errors import (
    DomainError,
    EstimationError,
    ExperimentError,
    GenerationError,
    LrdError,
    NumericError,
    RangeError,
)
from .estimators import LrvEstimate, bartlett_lrv, default_bandwidth, rs_hurst, sample_autocovariance
from .gaussgen import (
    EXPONENTIAL,
    IDENTITY,
    NEGATION,
    LrdModel,
    TimeSeries,
    Transform,
    asymptotic_dn,
    exact_dn,
    fgn_autocovariance,
    generate_fgn,
    replication_seed,
    simulate,
    subordinate,
)
from .hermite import (
    HermiteCoefficientTable,
    hermite_coeff_closed,
    hermite_coeff_quadrature,
    hermite_poly,
    lower_order_count,
)
from .montecarlo import CoverageReport, ExperimentConfig, run_coverage_experiment, true_quantile

__version__ = "0.1.0"
