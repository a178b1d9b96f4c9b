"""Scalar kernels: log-gamma, scaled erfc, compensated sums, log-domain products."""

import logging
import math
import sys
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    AccumulatorOverflowError,
    ConvergenceError,
    DomainError,
    ScaledOverflowError,
)

logger = logging.getLogger(__name__)

LOG_MAX = math.log(sys.float_info.max)        # ~ 709.78
LOG_MIN = math.log(5e-324)                    # smallest subnormal, ~ -744.44
SQRT_PI = math.sqrt(math.pi)
HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Stirling core region z >= STIRLING_SHIFT.
STIRLING_SHIFT = 10.0

# B_{2n} / (2n (2n - 1)) for n = 1..10
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)

_ERFCX_SERIES_LIMIT = 1.0
_ERFCX_MAX_ITER = 20000


class HiPrecAccumulator(NamedTuple):
    """Double-double running sum: the represented value is ``hi + lo``."""
    hi: float = 0.0
    lo: float = 0.0

    @property
    def value(self) -> float:
        return self.hi + self.lo


class LogScaled(NamedTuple):
    """A real stored as ``sign * exp(log_magnitude)``; sign 0 means zero."""
    log_magnitude: float
    sign: int = 1

    @classmethod
    def from_value(cls, value: float) -> "LogScaled":
        if value == 0.0:
            return cls(0.0, 0)
        return cls(math.log(abs(value)), 1 if value > 0 else -1)

    def multiply(self, other: "LogScaled") -> "LogScaled":
        if self.sign == 0 or other.sign == 0:
            return LogScaled(0.0, 0)
        return LogScaled(self.log_magnitude + other.log_magnitude, self.sign * other.sign)

    def to_float(self) -> float:
        return log_assemble([self], [])


def two_sum(a: float, b: float):
    """Error-free sum: a + b = s + e exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a: float, b: float):
    """Error-free sum assuming |a| >= |b|."""
    s = a + b
    e = b - (s - a)
    return s, e


def accumulate(acc: HiPrecAccumulator, term: float) -> HiPrecAccumulator:
    """Add a double to a double-double sum with error-free transformations.

    Raises:
        DomainError: if ``term`` is not finite.
        AccumulatorOverflowError: if the leading component overflows.
    """
    if not math.isfinite(term):
        raise DomainError(f"cannot accumulate non-finite term {term!r}")
    s, e = two_sum(acc.hi, term)
    if math.isinf(s):
        raise AccumulatorOverflowError(
            f"compensated sum overflowed adding {term!r} to {acc.hi!r}",
            exponent=math.log(abs(acc.hi)) if acc.hi else None,
        )
    e += acc.lo
    hi, lo = quick_two_sum(s, e)
    return HiPrecAccumulator(hi, lo)


def compensated_sum(terms: Iterable[float]) -> HiPrecAccumulator:
    acc = HiPrecAccumulator()
    for term in terms:
        acc = accumulate(acc, term)
    return acc


def log_gamma(z: float) -> float:
    """ln Gamma(z) for z > 0.

    The argument is shifted up into z >= 10 with the recurrence
    ln G(z) = ln G(z + n) - ln(z (z + 1) ... (z + n - 1)) and the
    Stirling series with ten Bernoulli terms is used there.

    Args:
        z: Positive real argument

    Returns:
        ln Gamma(z)

    Raises:
        DomainError: if z is not a positive finite number
    """
    z = float(z)
    if not (z > 0.0 and math.isfinite(z)):
        raise DomainError(f"log_gamma requires z > 0, got {z!r}")

    shift = 0.0
    if z < STIRLING_SHIFT:
        n = int(math.ceil(STIRLING_SHIFT - z))
        prod = 1.0
        for j in range(n):
            prod *= z + j
        shift = math.log(prod)
        z += n

    inv = 1.0 / z
    inv2 = inv * inv
    correction = 0.0
    power = inv
    for coeff in _STIRLING_COEFFS:
        correction += coeff * power
        power *= inv2
    return (z - 0.5) * math.log(z) - z + HALF_LOG_2PI + correction - shift


def _erfcx_series(z: float) -> float:
    # e^{z^2} erf(z) = (2/sqrt(pi)) sum 2^n z^{2n+1} / (2n+1)!!, all terms positive
    term = z
    total = z
    z2 = z * z
    n = 0
    while term > 1e-17 * total:
        n += 1
        term *= 2.0 * z2 / (2 * n + 1)
        total += term
    return math.exp(z2) - 2.0 / SQRT_PI * total


def _erfcx_continued_fraction(z: float) -> float:
    # erfc(z) = e^{-z^2}/sqrt(pi) / (z + (1/2)/(z + (2/2)/(z + ...))), modified Lentz
    tiny = 1e-300
    f = z
    c = f
    d = 0.0
    for n in range(1, _ERFCX_MAX_ITER):
        a_n = 0.5 * n
        d = z + a_n * d
        if d == 0.0:
            d = tiny
        c = z + a_n / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 3e-16:
            return 1.0 / (SQRT_PI * f)
    raise ConvergenceError(f"erfcx continued fraction did not converge at z={z!r}")


def _erfcx_nonnegative(z: float) -> float:
    if z < _ERFCX_SERIES_LIMIT:
        return _erfcx_series(z)
    return _erfcx_continued_fraction(z)


def erfcx(z: float) -> float:
    """Scaled complementary error function e^{z^2} erfc(z).

    Negative arguments use 2 e^{z^2} - erfcx(-z), which overflows below
    z ~ -26.6; use :func:`erfcx_scaled` there.
    """
    z = float(z)
    if not math.isfinite(z):
        if math.isnan(z):
            return math.nan
        return 0.0 if z > 0 else math.inf
    if z >= 0.0:
        return _erfcx_nonnegative(z)
    return erfcx_scaled(z).to_float()


def erfcx_scaled(z: float) -> LogScaled:
    """erfcx(z) in log form, valid for every real z."""
    z = float(z)
    if not math.isfinite(z):
        if math.isnan(z):
            return LogScaled(math.nan, 1)
        return LogScaled(0.0, 0) if z > 0 else LogScaled(math.inf, 1)
    if z >= 0.0:
        return LogScaled(math.log(_erfcx_nonnegative(z)), 1)
    w = -z
    # 2 e^{w^2} - erfcx(w) = 2 e^{w^2} (1 - erfc(w)/2)
    erfc_w = _erfcx_nonnegative(w) * math.exp(-w * w)
    return LogScaled(w * w + math.log(2.0) + math.log1p(-0.5 * erfc_w), 1)


def log_assemble(factors: Sequence[LogScaled], linear_terms: Sequence[float]) -> float:
    """Product of log-scaled factors and ordinary reals, exponentiated once.

    Args:
        factors: Log-domain factors, each possibly out of double range alone
        linear_terms: Ordinary multiplicative factors

    Returns:
        The product as a float

    Raises:
        ScaledOverflowError: if the combined exponent is outside double range
    """
    sign = 1
    logs = []
    for f in factors:
        if f.sign == 0:
            return 0.0
        sign *= f.sign
        logs.append(f.log_magnitude)
    for v in linear_terms:
        if v == 0.0:
            return 0.0
        if v < 0.0:
            sign = -sign
        logs.append(math.log(abs(v)))
    exponent = math.fsum(logs)
    if exponent > LOG_MAX:
        raise ScaledOverflowError(
            f"log-domain product overflows: exponent {exponent:.6g} > {LOG_MAX:.6g}",
            exponent=exponent,
        )
    if exponent < LOG_MIN:
        raise ScaledOverflowError(
            f"log-domain product underflows: exponent {exponent:.6g} < {LOG_MIN:.6g}",
            exponent=exponent,
        )
    return sign * math.exp(exponent)
