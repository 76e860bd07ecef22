"""Exceptions raised across the package."""


class BoundEntError(Exception):
    """Base class for all package errors."""


class NotHermitian(BoundEntError, ValueError):
    pass


class NoConvergence(BoundEntError, ArithmeticError):
    pass


class ZeroVector(BoundEntError, ValueError):
    pass


class NormalizationViolated(BoundEntError, ValueError):
    pass


class BadDims(BoundEntError, ValueError):
    pass


class NegativeRadicand(BoundEntError, ArithmeticError):
    """A closed-form square root received a negative argument."""


class DegenerateScalar(BoundEntError, ValueError):
    """A free scalar that must be nonzero for the chosen family was zero."""


class NoStabilization(BoundEntError, ArithmeticError):
    """Sampled span kept growing past the ambient bound."""
