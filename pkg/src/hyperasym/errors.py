"""Exception hierarchy shared by the numerics and the CLI."""

from typing import Optional


class HyperAsymError(Exception):
    """Base class for every error raised by this package."""


class DomainError(HyperAsymError, ValueError):
    """An input lies outside the range an operation is defined on."""


class SingularCoefficientError(DomainError):
    """A closed-form coefficient divides by c = a(1 - a) = 0."""


class RegimeError(DomainError):
    """The requested approximation is not valid for this parameter regime."""


class ConditioningError(HyperAsymError, ArithmeticError):
    """The saddle point sits too close to the amplitude pole."""


class ConvergenceError(HyperAsymError, RuntimeError):
    """A series did not settle within its term budget or lost monotonicity."""


class ScaledOverflowError(HyperAsymError, OverflowError):
    """A log-domain value cannot be exponentiated into a double."""

    def __init__(self, message: str, exponent: Optional[float] = None):
        super().__init__(message)
        self.exponent = exponent


class AccumulatorOverflowError(ScaledOverflowError):
    """The leading component of a compensated sum became infinite."""
