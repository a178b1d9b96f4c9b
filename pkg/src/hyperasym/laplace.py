"""Generic Laplace-method coefficients about the saddle tau = a.

The integral is int_0^1 f(tau) exp(k psi(tau)) dtau with

    psi(tau) = a log tau + (1 - a) log(1 - tau)
    f(tau)   = tau^(-1/2) (1 - tau)^(-1/2) / (1 - z tau)

All derivatives are closed-form; this module re-derives the closed-form
c2 and c4 of :mod:`hyperasym.expansions` independently.
"""

import math
from typing import List, Tuple

from .errors import ConditioningError, DomainError

# |1 - a z| below this and the amplitude pole sits on the saddle.
CONDITIONING = 1e-6


def psi_derivative(order: int, a: float) -> float:
    """psi^(order)(a) for order >= 2."""
    if order < 2:
        raise DomainError(f"phase derivative order must be >= 2, got {order}")
    fact = math.factorial(order - 1)
    b = 1.0 - a
    return fact * ((-1) ** (order - 1) / a ** (order - 1) - 1.0 / b ** (order - 1))


def log_amplitude_derivatives(a: float, z: float, n: int) -> List[float]:
    """[L_1, ..., L_n] with L_j = d^j/dtau^j log f(tau) at tau = a."""
    b = 1.0 - a
    w = 1.0 - z * a
    out = []
    for j in range(1, n + 1):
        fact = math.factorial(j - 1)
        out.append(
            -0.5 * (-1) ** (j - 1) * fact / a ** j
            + 0.5 * fact / b ** j
            + fact * (z / w) ** j
        )
    return out


def amplitude_ratios(a: float, z: float, n: int = 4) -> List[float]:
    """[F_1, ..., F_n] with F_k = f^(k)(a) / f(a).

    Complete Bell polynomials of the log-derivatives:
    B_{m+1} = sum_i C(m, i) B_{m-i} L_{i+1}.
    """
    L = log_amplitude_derivatives(a, z, n)
    B = [1.0]
    for m in range(n):
        B.append(sum(math.comb(m, i) * B[m - i] * L[i] for i in range(m + 1)))
    return B[1:]


def laplace_generic_coeffs(a: float, z: float) -> Tuple[float, float]:
    """(c2, c4) of the Laplace expansion, from phase and amplitude derivatives.

    Raises:
        DomainError: a outside (0, 1)
        ConditioningError: |1 - a z| < 1e-6
    """
    if not 0.0 < a < 1.0:
        raise DomainError(f"Laplace engine needs 0 < a < 1, got {a}")
    if abs(1.0 - a * z) < CONDITIONING:
        raise ConditioningError(
            f"saddle tau={a} too close to amplitude pole 1/z={1.0 / z}: "
            f"|1 - az| = {abs(1.0 - a * z):.3g}"
        )

    d2 = psi_derivative(2, a)
    P3, P4, P5, P6 = (psi_derivative(j, a) / d2 for j in range(3, 7))
    F1, F2, F3, F4 = amplitude_ratios(a, z, 4)

    c2 = -(F2 - P3 * F1 + 5.0 / 12.0 * P3 ** 2 - 0.25 * P4) / d2
    c4 = (
        F4 / 6.0
        - 5.0 / 9.0 * P3 * F3
        + 5.0 / 12.0 * (7.0 / 3.0 * P3 ** 2 - P4) * F2
        - 35.0 / 36.0 * (P3 ** 3 - P3 * P4 + 6.0 / 35.0 * P5) * F1
        + 35.0 / 36.0 * (
            11.0 / 24.0 * P3 ** 4
            - 0.75 * (P3 ** 2 - P4 / 6.0) * P4
            + P3 * P5 / 5.0
            - P6 / 35.0
        )
    ) / d2 ** 2
    return c2, c4
