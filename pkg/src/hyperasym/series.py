"""Direct summation of the 3F2 oracle S(x;t) and of the Gauss functions F_m."""

import logging
import math
from typing import Iterator, Tuple

from .errors import ConvergenceError, DomainError, ScaledOverflowError
from .kernels import HiPrecAccumulator, accumulate
from .models import DerivedParams, Number, SeriesResult, SeriesSpec, SeriesStatus

logger = logging.getLogger(__name__)

DEFAULT_MAX_TERMS = 10_000_000
DEFAULT_ORACLE_TOL = 1e-20
# Accuracy floor of the x = 1 oracle: the tail is only extrapolated.
ALGEBRAIC_TOL_FLOOR = 1e-9


def term_ratio(spec: SeriesSpec, r: int) -> float:
    """T_{r+1} / T_r = z * prod(r + num) / ((r + 1) * prod(r + den))."""
    num = 1.0
    for alpha in spec.numerator_params:
        num *= r + alpha
    den = r + 1.0
    for beta in spec.denominator_params:
        den *= r + beta
    return spec.argument * num / den


def iter_terms(spec: SeriesSpec) -> Iterator[float]:
    """Yield T_0 = 1, T_1, T_2, ... built by the ratio recurrence."""
    term = 1.0
    r = 0
    while True:
        yield term
        term *= term_ratio(spec, r)
        r += 1


def _limit_ratio(spec: SeriesSpec) -> float:
    p = len(spec.numerator_params)
    q = len(spec.denominator_params) + 1
    if p > q:
        raise DomainError(
            f"series with {p} numerator and {q - 1} denominator parameters diverges"
        )
    return spec.argument if p == q else 0.0


def _algebraic_constants(spec: SeriesSpec) -> Tuple[float, float, float]:
    """(sigma, gamma, kappa) of T_r ~ C (r + gamma)^-sigma (1 + kappa/(r + gamma)^2)."""
    alphas = list(spec.numerator_params)
    betas = list(spec.denominator_params) + [1.0]
    sigma = sum(betas) - sum(alphas)
    d2 = (sum(b * b for b in betas) - sum(a * a for a in alphas)) / 2.0
    d3 = (sum(a ** 3 for a in alphas) - sum(b ** 3 for b in betas)) / 3.0
    gamma = d2 / sigma - 0.5
    kappa = -(d3 + sigma * gamma * gamma + sigma * gamma + sigma / 3.0) / 2.0
    return sigma, gamma, kappa


def _algebraic_tail(n: int, term: float, sigma: float, gamma: float, kappa: float) -> float:
    # Euler-Maclaurin midpoint sum of the model over r > n, scaled to T_n.
    rho_n = n + gamma
    scale = term / (rho_n ** -sigma * (1.0 + kappa / rho_n ** 2))
    rho0 = n + 0.5 + gamma
    return scale * (
        rho0 ** (1.0 - sigma) / (sigma - 1.0)
        + kappa * rho0 ** (-sigma - 1.0) / (sigma + 1.0)
        + sigma * rho0 ** (-sigma - 1.0) / 24.0
    )


def sum_hypergeometric(spec: SeriesSpec) -> SeriesResult:
    """Sum a positive-term generalized hypergeometric series.

    Terms are built by the ratio recurrence and accumulated in double-double.
    Truncation is only allowed past the term peak. For argument < 1 the
    omitted tail is bounded geometrically; for argument 1 (with positive
    parametric excess) the algebraic tail is extrapolated and the sum is
    accepted once the extrapolated values at N and N/2 agree.

    Args:
        spec: Series parameters, argument, tolerance and term budget

    Returns:
        SeriesResult with the value, terms used and relative tail bound

    Raises:
        DomainError: argument 1 without positive parametric excess, or p > q + 1
        ConvergenceError: terms grow again after their peak
    """
    limit = _limit_ratio(spec)
    if spec.argument == 0.0:
        return SeriesResult(1.0, 1, 0.0, SeriesStatus.CONVERGED, 0)
    if limit >= 1.0:
        if spec.parametric_excess <= 0.0:
            raise DomainError(
                f"argument 1 requires positive parametric excess, "
                f"got {spec.parametric_excess}"
            )
        return _sum_algebraic(spec)
    return _sum_geometric(spec, limit)


def _sum_geometric(spec: SeriesSpec, limit: float) -> SeriesResult:
    tol = spec.rel_tol
    acc = accumulate(HiPrecAccumulator(), 1.0)
    term = 1.0
    peak = -1
    tail = math.inf
    n = 1
    for r in range(spec.max_terms - 1):
        ratio = term_ratio(spec, r)
        if ratio < 1.0:
            if peak < 0:
                peak = r
        elif peak >= 0:
            raise ConvergenceError(
                f"term ratio {ratio:.6g} >= 1 at r={r} after the peak at r={peak}"
            )
        term *= ratio
        if not math.isfinite(term):
            raise ScaledOverflowError(f"series term overflowed at r={r + 1}")
        acc = accumulate(acc, term)
        n = r + 2
        if peak < 0:
            continue
        rho = max(term_ratio(spec, r + 1), limit)
        if rho >= 1.0:
            continue
        total = acc.value
        tail = term * rho / (1.0 - rho) / total
        if term <= tol * total and tail <= tol:
            logger.debug("series converged: %d terms, peak at %d", n, peak)
            return SeriesResult(acc.value, n, tail, SeriesStatus.CONVERGED, peak)

    logger.warning(
        "series hit the term cap of %d (relative tail bound %.3g)", spec.max_terms, tail
    )
    return SeriesResult(acc.value, n, tail, SeriesStatus.TERM_CAP_HIT, max(peak, 0))


def _sum_algebraic(spec: SeriesSpec) -> SeriesResult:
    tol = spec.rel_tol
    sigma, gamma, kappa = _algebraic_constants(spec)
    acc = accumulate(HiPrecAccumulator(), 1.0)
    term = 1.0
    peak = -1
    checkpoint = -1
    previous = None
    estimate = 1.0
    tail = 0.0
    drift = math.inf
    n = 1
    for r in range(spec.max_terms - 1):
        ratio = term_ratio(spec, r)
        if ratio < 1.0:
            if peak < 0:
                peak = r
                checkpoint = max(1024, 8 * (peak + 1), int(4 * abs(gamma)))
        elif peak >= 0:
            raise ConvergenceError(
                f"term ratio {ratio:.6g} >= 1 at r={r} after the peak at r={peak}"
            )
        term *= ratio
        if not math.isfinite(term):
            raise ScaledOverflowError(f"series term overflowed at r={r + 1}")
        acc = accumulate(acc, term)
        n = r + 2
        if r + 1 != checkpoint:
            continue

        tail = _algebraic_tail(r + 1, term, sigma, gamma, kappa)
        estimate = accumulate(acc, tail).value
        if previous is not None:
            drift = abs(estimate - previous) / estimate
            logger.debug(
                "algebraic tail checkpoint N=%d: estimate %.17g drift %.3g",
                r + 1, estimate, drift,
            )
            if drift <= tol:
                return SeriesResult(
                    estimate, n, drift, SeriesStatus.CONVERGED, peak, tail
                )
        previous = estimate
        checkpoint *= 2

    logger.warning(
        "x=1 series hit the term cap of %d (extrapolation drift %.3g)",
        spec.max_terms, drift,
    )
    value = estimate if previous is not None else acc.value
    return SeriesResult(value, n, drift, SeriesStatus.TERM_CAP_HIT, max(peak, 0), tail)


def s_oracle(
    k: Number,
    x: Number,
    t: Number,
    rel_tol: float = DEFAULT_ORACLE_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SeriesResult:
    """High-precision S(x;t) = 3F2(1, ak, ak + 1/2; tk + 1, k + 1; x).

    t = 0 and x = 0 are accepted as boundary cases. At x = 1 the tail is
    extrapolated and the tolerance is floored at ALGEBRAIC_TOL_FLOOR.
    """
    k, x, t = float(k), float(x), float(t)
    if not k > 0.0:
        raise DomainError(f"k must be positive, got {k}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    if x == 1.0 and rel_tol < ALGEBRAIC_TOL_FLOOR:
        logger.info(
            "x=1 oracle: relaxing rel_tol %.3g to %.3g", rel_tol, ALGEBRAIC_TOL_FLOOR
        )
        rel_tol = ALGEBRAIC_TOL_FLOOR
    ak = 0.5 * (1.0 + t) * k
    spec = SeriesSpec(
        numerator_params=(1.0, ak, ak + 0.5),
        denominator_params=(t * k + 1.0, k + 1.0),
        argument=x,
        rel_tol=rel_tol,
        max_terms=max_terms,
    )
    return sum_hypergeometric(spec)


def f_m_spec(
    m: int, p: DerivedParams, rel_tol: float, max_terms: int = DEFAULT_MAX_TERMS
) -> SeriesSpec:
    """Series parameters of F_m = 2F1(m + 1, ak + m; tk + m + 1; ax)."""
    if m < 0:
        raise DomainError(f"m must be non-negative, got {m}")
    if p.chi >= 1.0:
        raise DomainError(
            f"F_m diverges for ax >= 1 (ax={p.chi}, t={p.t}); t = 1 needs x < 1"
        )
    return SeriesSpec(
        numerator_params=(m + 1.0, p.a * p.k + m),
        denominator_params=(p.t * p.k + m + 1.0,),
        argument=p.chi,
        rel_tol=rel_tol,
        max_terms=max_terms,
    )


def f_m(
    m: int,
    p: DerivedParams,
    rel_tol: float = DEFAULT_ORACLE_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SeriesResult:
    """F_m = 2F1(m + 1, ak + m; tk + m + 1; ax) by direct summation."""
    return sum_hypergeometric(f_m_spec(m, p, rel_tol, max_terms))
