"""Exception hierarchy shared by all modules."""


class LrdError(Exception):
    """Base class for library errors."""


class DomainError(LrdError, ValueError):
    """An argument lies outside the domain of the operation."""


class RangeError(DomainError):
    """A requested order or size exceeds a supported range."""


class GenerationError(LrdError, RuntimeError):
    """Series synthesis failed (e.g. circulant embedding not PSD)."""


class EstimationError(LrdError, RuntimeError):
    """A statistical estimate could not be formed or is degenerate."""


class NumericError(LrdError, ArithmeticError):
    """A numerical routine failed to converge."""


class ExperimentError(LrdError, RuntimeError):
    """A Monte Carlo experiment produced no usable replications."""
