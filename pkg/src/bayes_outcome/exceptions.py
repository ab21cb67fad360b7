"""Exception hierarchy.

Validation errors describe bad input (CLI exit status 1); computation
errors describe inputs that are well formed but cannot be fitted or
integrated (CLI exit status 2).
"""


class BayesOutcomeError(Exception):
    """Base class for all package errors."""


class ValidationError(BayesOutcomeError, ValueError):
    """Malformed input: wrong shapes, bad labels, non-finite values."""


class ComputationError(BayesOutcomeError, ArithmeticError):
    """Well-formed input on which a fit or prediction is undefined."""


class EmptyClassError(ComputationError):
    """No samples carry the requested label."""


class DegenerateClassError(ComputationError):
    """A class has fewer than two samples, so the noise scale is undefined."""


class ZeroVarianceError(ComputationError):
    """A class has zero within-class variance."""


class DimensionError(ValidationError):
    """Dimension below the range where the chi-square reduction holds (d < 3)."""


class QuadratureConvergenceWarning(RuntimeWarning):
    """Doubling the node counts moved a quadrature result by more than the tolerance."""
