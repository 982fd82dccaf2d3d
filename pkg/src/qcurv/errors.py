"""Exception types shared across the package."""


class QcurvError(Exception):
    """Base class for computation errors raised by this package."""


class DimensionError(QcurvError, ValueError):
    """Unsupported dimension (odd, or below the smallest even dimension)."""


class ProfileError(QcurvError, ValueError):
    """Invalid profile parameters or sample grids."""


class DerivativeOrderError(QcurvError, ValueError):
    """A derivative of higher order than the profile exposes was requested."""


class ConvergenceError(QcurvError):
    """Adaptive quadrature failed to meet the requested tolerance.

    Carries the best available estimate so callers can degrade gracefully.
    """

    def __init__(self, message, value, error):
        super().__init__(message)
        self.value = value
        self.error = error


class TailError(QcurvError):
    """A half-line tail cannot be bounded below the requested tolerance."""


class CurvatureSignError(QcurvError):
    """Pointwise curvature has the wrong sign for the requested diagnostic."""
