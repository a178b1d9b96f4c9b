"""Derived parameters, closed-form coefficients and the large-k expansions of S(x;t)."""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import ConvergenceError, DomainError, SingularCoefficientError
from .kernels import log_gamma
from .models import DerivedParams, ExpansionResult, Number, Variant
from .series import DEFAULT_MAX_TERMS, DEFAULT_ORACLE_TOL, f_m
from .variants import get_variant

logger = logging.getLogger(__name__)

# Below this k*t the expansion is flagged, not refused.
REGIME_MIN_KT = 10.0
# c below this (with t != 1) is treated as the t = 1 reduction.
DEGENERATE_C = 1e-12


def derive_params(k: Number, x: Number, t: Number) -> DerivedParams:
    """Bundle (k, x, t) with a, b, c, X, chi, eps, lambda, x_star and alpha.

    Exact inputs (int or Fraction) are carried through in rational
    arithmetic and rounded once, so eps*chi is exactly 1 at x = x_star.

    Raises:
        DomainError: unless k > 0, 0 < x <= 1 and 0 < t <= 1
    """
    if not float(k) > 0.0:
        raise DomainError(f"k must be positive, got {k}")
    if not 0.0 < float(x) <= 1.0:
        raise DomainError(f"x must lie in (0, 1], got {x}")
    if not 0.0 < float(t) <= 1.0:
        raise DomainError(f"t must lie in (0, 1], got {t}")

    if all(isinstance(v, (int, Fraction)) for v in (k, x, t)):
        k, x, t = Fraction(k), Fraction(x), Fraction(t)
    else:
        k, x, t = float(k), float(x), float(t)

    a = (1 + t) / 2
    b = (1 - t) / 2
    return DerivedParams(
        k=float(k),
        x=float(x),
        t=float(t),
        a=float(a),
        b=float(b),
        c=float(a * b),
        X=float(a * x / t),
        chi=float(a * x),
        epsilon=float(a / t),
        lam=float(t * k),
        x_star=float(4 * t / (1 + t) ** 2),
        alpha=float(4 * (1 + a) / (a * t)),
        eps_chi=float(a * a * x / t),
    )


def _check_coefficient_args(a: float, z: float) -> Tuple[float, float]:
    c = a * (1.0 - a)
    if c == 0.0:
        raise SingularCoefficientError(
            f"c = a(1 - a) = 0 at a={a}; the t = 1 path has its own reduction"
        )
    w = 1.0 - a * z
    if w == 0.0:
        raise DomainError(f"az = 1 at a={a}, z={z}")
    return c, w


def c2_coeff(a: float, z: float) -> float:
    """c2(a, z) = 2cz^2/(1-az)^2 + (1-2a)z/(1-az) - (1+2c)/(12c)."""
    c, w = _check_coefficient_args(a, z)
    return 2 * c * z ** 2 / w ** 2 + (1 - 2 * a) * z / w - (1 + 2 * c) / (12 * c)


def c4_prime(a: float, z: float) -> float:
    """c4 without its c2 correction: c4' = c4 + (1+2c)/(36c) c2."""
    c, w = _check_coefficient_args(a, z)
    return (
        4 * c ** 2 * z ** 4 / w ** 4
        + 14 * (1 - 2 * a) * c * z ** 3 / (3 * w ** 3)
        + (3 - 20 * c) * z ** 2 / (3 * w ** 2)
        - 2 * (1 - 2 * a) * z / (3 * w)
        - (1 + 2 * c) ** 2 / (864 * c ** 2)
    )


def c4_coeff(a: float, z: float) -> float:
    c = a * (1.0 - a)
    prime = c4_prime(a, z)
    return prime - (1 + 2 * c) / (36 * c) * c2_coeff(a, z)


def xi_gamma(a: float, k: float) -> float:
    """Xi(a,k) = G(k+1) / (G(ak+1/2) G((1-a)k+1/2)) (k/2pi)^(-1/2) a^(ak) (1-a)^((1-a)k)."""
    _check_xi_args(a, k)
    b = 1.0 - a
    log_xi = (
        log_gamma(k + 1.0)
        - log_gamma(a * k + 0.5)
        - log_gamma(b * k + 0.5)
        - 0.5 * math.log(k / (2.0 * math.pi))
        + a * k * math.log(a)
        + b * k * math.log(b)
    )
    return math.exp(log_xi)


def xi_series(a: float, k: float) -> float:
    """Two-term large-k form of Xi(a, k)."""
    _check_xi_args(a, k)
    c = a * (1.0 - a)
    return 1.0 + (1 + 2 * c) / (24 * c * k) + (1 + 2 * c) ** 2 / (1152 * c ** 2 * k ** 2)


def xi_factor(a: float, k: float, form: str = "gamma") -> float:
    if form == "gamma":
        return xi_gamma(a, k)
    if form == "series":
        return xi_series(a, k)
    raise DomainError(f"unknown Xi form {form!r}; expected 'gamma' or 'series'")


def _check_xi_args(a: float, k: float) -> None:
    if not 0.0 < a < 1.0:
        raise DomainError(f"Xi(a, k) needs 0 < a < 1, got a={a}")
    if not k > 0.0:
        raise DomainError(f"Xi(a, k) needs k > 0, got k={k}")


def a_m(m: int, p: DerivedParams) -> float:
    """A_m = (ak)_m / (tk + 1)_m as an m-fold product."""
    if m < 0:
        raise DomainError(f"m must be non-negative, got {m}")
    ak = p.a * p.k
    tk1 = p.t * p.k + 1.0
    value = 1.0
    for j in range(m):
        value *= (ak + j) / (tk1 + j)
    return value


def a_m_first_order(m: int, p: DerivedParams) -> float:
    """(a/t)^m (1 + kappa_m/k), kappa_m = m(m-1)/(2a) - m(m+1)/(2t)."""
    kappa = m * (m - 1) / (2 * p.a) - m * (m + 1) / (2 * p.t)
    return (p.a / p.t) ** m * (1.0 + kappa / p.k)


def f_values(
    p: DerivedParams,
    count: int,
    rel_tol: float = DEFAULT_ORACLE_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> Tuple[float, ...]:
    """(F_0, ..., F_{count-1}); every series must converge."""
    values = []
    for m in range(count):
        result = f_m(m, p, rel_tol, max_terms)
        if not result.converged:
            raise ConvergenceError(
                f"F_{m} did not converge in {result.terms_used} terms "
                f"(tail bound {result.tail_bound:.3g})"
            )
        values.append(result.value)
    return tuple(values)


def resolve_variant(p: DerivedParams, variant: Optional[Variant]) -> Tuple[Variant, List[str]]:
    """Pick the variant for p, rerouting degenerate c to the t = 1 reduction."""
    flags = []
    if p.t != 1.0 and p.c < DEGENERATE_C:
        logger.warning("c=%.3g below %.0e at t=%r: using the t = 1 reduction",
                       p.c, DEGENERATE_C, p.t)
        flags.append("degenerate_c")
        return Variant.T_EQUALS_1, flags
    if variant is None:
        variant = Variant.T_EQUALS_1 if p.t == 1.0 else Variant.EXPANDED_AM
    if not get_variant(variant).supports(p):
        raise DomainError(f"variant {variant} is not defined at t={p.t}")
    return variant, flags


def s_asym(
    p: DerivedParams,
    M: int,
    variant: Optional[Variant] = None,
    rel_tol: float = DEFAULT_ORACLE_TOL,
    F: Optional[Sequence[float]] = None,
) -> ExpansionResult:
    """Truncated expansion S ~ F_0 + T1/k + T2/k^2 at order M in {0, 1, 2}.

    Args:
        p: Derived parameters
        M: Truncation order
        variant: Bracket algebra; defaults to expanded_Am (t_equals_1 at t = 1)
        rel_tol: Tolerance for the F_m series
        F: Precomputed F_0 .. F_4, shared across variants

    Returns:
        ExpansionResult whose terms sum to its value
    """
    if M not in (0, 1, 2):
        raise DomainError(f"order M must be 0, 1 or 2, got {M}")
    variant, flags = resolve_variant(p, variant)
    if p.k * p.t < REGIME_MIN_KT:
        logger.warning("kt=%.3g below %.0f: expansion outside its regime",
                       p.k * p.t, REGIME_MIN_KT)
        flags.append("kt_below_10")

    needed = (1, 3, 5)[M]
    if F is None:
        F = f_values(p, needed, rel_tol)
    A = [a_m(m, p) for m in range(needed)]
    strategy = get_variant(variant)

    terms = [F[0]]
    if M >= 1:
        terms.append(strategy.first_bracket(p, F, A) / p.k)
    if M >= 2:
        terms.append(strategy.second_bracket(p, F, A) / p.k ** 2)
    return ExpansionResult(
        value=math.fsum(terms),
        order=M,
        terms=tuple(terms),
        variant=variant,
        flags=tuple(flags),
    )


def f0_derivatives(p: DerivedParams, F: Sequence[float]) -> List[float]:
    """d^m F_0 / dchi^m = m! A_m F_m for m = 0 .. len(F) - 1."""
    return [math.factorial(m) * a_m(m, p) * F[m] for m in range(len(F))]


def s_confluence(
    p: DerivedParams, M: int, F: Optional[Sequence[float]] = None
) -> ExpansionResult:
    """The same expansion written with derivatives of F_0 in chi."""
    if M not in (0, 1, 2):
        raise DomainError(f"order M must be 0, 1 or 2, got {M}")
    if F is None:
        F = f_values(p, (1, 3, 5)[M])
    D = f0_derivatives(p, F)
    a, c, k, chi = p.a, p.c, p.k, p.chi
    terms = [D[0]]
    if M >= 1:
        terms.append(
            ((1 - 2 * a) * chi * D[1] + (1 - a) * chi ** 2 * D[2]) / (2 * a * k)
        )
    if M >= 2:
        terms.append(
            (
                12 * a * (2 * a - 1) * chi * D[1]
                + 3 * (3 - 20 * c) * chi ** 2 * D[2]
                + 14 * (1 - a) * (1 - 2 * a) * chi ** 3 * D[3]
                + 3 * (1 - a) ** 2 * chi ** 4 * D[4]
            )
            / (24 * a ** 2 * k ** 2)
        )
    return ExpansionResult(
        value=math.fsum(terms),
        order=M,
        terms=tuple(terms),
        variant=Variant.EXACT_AM,
        flags=("confluence",),
    )


def stirling2(m: int, j: int) -> int:
    """Stirling number of the second kind S(m, j)."""
    row = [1]
    for n in range(1, m + 1):
        row = [0] + [
            (i * row[i] if i < len(row) else 0) + row[i - 1] for i in range(1, n + 1)
        ]
    return row[j] if j < len(row) else 0


def theta_moment(m: int, p: DerivedParams, F: Optional[Sequence[float]] = None) -> float:
    """Theta^m F_0 with Theta = chi d/dchi, via sum_j S(m, j) chi^j F_0^(j)."""
    if F is None:
        F = f_values(p, m + 1)
    D = f0_derivatives(p, F[: m + 1])
    return math.fsum(stirling2(m, j) * p.chi ** j * D[j] for j in range(m + 1))


def confluence_pr_check(r: int, a: float, k: float) -> Tuple[float, float]:
    """P_r = a^(-r) (ak + 1/2)_r / (k + 1)_r, exact and to O(k^-2).

    Raises:
        DomainError: r < 0 or k < 10 r^2
    """
    if r < 0:
        raise DomainError(f"r must be non-negative, got {r}")
    if k < 10 * r * r:
        raise DomainError(f"P_r expansion needs k >= 10 r^2, got k={k}, r={r}")
    exact = 1.0
    for j in range(r):
        exact *= (a * k + 0.5 + j) / (a * (k + 1.0 + j))
    expanded = (
        1.0
        - (a * r - r * r * (1 - a)) / (2 * a * k)
        + (
            (2 * a * a + 1) * r
            + 9 * a * a * r ** 2
            - 2 * (1 - a) * (5 * a + 2) * r ** 3
            + 3 * (1 - a) ** 2 * r ** 4
        )
        / (24 * a * a * k * k)
    )
    return exact, expanded
