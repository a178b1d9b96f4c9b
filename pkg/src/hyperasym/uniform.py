"""Large-lambda evaluation of F0 = 2F1(1, eps*lam; 1 + lam; chi).

Phase phi(tau) = (eps - 1) log(tau - 1) - eps log tau has a saddle at
tau = eps and the amplitude a simple pole at tau = 1/chi; they coalesce
at eps*chi = 1. The saddle form is valid only away from the coalescence;
the uniform erfc form holds across it.
"""

import logging
import math

import numpy as np

from .errors import DomainError, RegimeError
from .kernels import LogScaled, erfcx_scaled, log_assemble, log_gamma
from .models import DerivedParams, Regime, SaddleGeometry, UniformResult

logger = logging.getLogger(__name__)

# |eps*chi - 1| inside this band: d0 from extrapolation
COALESCENCE_BAND = 1e-3
# f0_saddle refuses unless 1 - eps*chi is at least this
SADDLE_MIN_GAP = 0.1
# series for p^2 used while |u| < this fraction of eps - 1
_SERIES_RADIUS = 0.25
_EXTRAPOLATION_NODES = (-3.0, -1.5, 1.5, 3.0)


def phase(tau: float, epsilon: float) -> float:
    return (epsilon - 1.0) * math.log(tau - 1.0) - epsilon * math.log(tau)


def phase_gap_squared(epsilon: float, u: float, method: str = "auto") -> float:
    """p^2 = phi(eps) - phi(eps + u), clamped at zero.

    Methods:
        logs:   difference of the two phases
        log1p:  -(eps-1) log1p(u/(eps-1)) + eps log1p(u/eps)
        series: sum_{n>=2} (-1)^n u^n/n [(eps-1)^(1-n) - eps^(1-n)]
        auto:   series near the saddle, log1p elsewhere
    """
    e1 = epsilon - 1.0
    if method == "auto":
        method = "series" if abs(u) < _SERIES_RADIUS * e1 else "log1p"
    if method == "logs":
        value = phase(epsilon, epsilon) - phase(epsilon + u, epsilon)
    elif method == "log1p":
        value = -e1 * math.log1p(u / e1) + epsilon * math.log1p(u / epsilon)
    elif method == "series":
        if abs(u) >= e1:
            raise DomainError(f"p^2 series diverges for |u|={abs(u)} >= eps-1={e1}")
        value = 0.0
        n = 2
        pow_e1 = 1.0 / e1
        pow_e = 1.0 / epsilon
        u_n = u * u
        while True:
            term = u_n / n * (pow_e1 - pow_e)
            if n % 2:
                term = -term
            value += term
            if abs(term) <= 1e-17 * abs(value) or n > 2000:
                break
            n += 1
            u_n *= u
            pow_e1 /= e1
            pow_e /= epsilon
    else:
        raise DomainError(f"unknown p^2 method {method!r}")
    return max(value, 0.0)


def _geometry(epsilon: float, chi: float, lam: float, eps_chi: float) -> SaddleGeometry:
    if not epsilon > 1.0:
        raise DomainError(f"uniform regime needs eps > 1 (t < 1), got eps={epsilon}")
    if not 0.0 < chi < 1.0:
        raise DomainError(f"chi must lie in (0, 1), got {chi}")
    s = eps_chi - 1.0
    # 1/chi - eps written through s = eps*chi - 1
    u = -epsilon * s / (1.0 + s)
    p = math.sqrt(phase_gap_squared(epsilon, u))
    if abs(s) < COALESCENCE_BAND:
        regime = Regime.COALESCED
    elif s < 0.0:
        regime = Regime.SADDLE_DOMINANT
    else:
        regime = Regime.POLE_DOMINANT
    return SaddleGeometry(
        epsilon=epsilon,
        chi=chi,
        lam=lam,
        phi_at_saddle=phase(epsilon, epsilon),
        phi_at_pole=phase(1.0 / chi, epsilon),
        p=p,
        regime=regime,
        eps_chi=eps_chi,
    )


def geometry(p: DerivedParams) -> SaddleGeometry:
    """Saddle/pole geometry for F0 at the given parameters.

    Raises:
        DomainError: t = 1 (eps = 1) or chi outside (0, 1)
    """
    return _geometry(p.epsilon, p.chi, p.lam, p.eps_chi)


def g_lambda(lam: float, epsilon: float) -> LogScaled:
    """G(lam) = Gamma(1 + lam) Gamma((eps - 1) lam) / Gamma(eps lam), in log form."""
    if not lam > 0.0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if not epsilon > 1.0:
        raise DomainError(f"eps must exceed 1, got {epsilon}")
    log_g = (
        log_gamma(1.0 + lam)
        + log_gamma((epsilon - 1.0) * lam)
        - log_gamma(epsilon * lam)
    )
    return LogScaled(log_g, 1)


def _saddle_prefactor(lam: float, epsilon: float) -> LogScaled:
    """G(lam) exp(-lam phi(eps)), which grows like sqrt(lam)."""
    return g_lambda(lam, epsilon).multiply(LogScaled(-lam * phase(epsilon, epsilon), 1))


def stirling_ratio(lam: float, epsilon: float) -> float:
    """G(lam) e^{-lam phi(eps)} / [(2 pi lam)^(1/2) (eps/(eps-1))^(1/2)], -> 1."""
    scale = math.sqrt(2.0 * math.pi * lam * epsilon / (epsilon - 1.0))
    return log_assemble([_saddle_prefactor(lam, epsilon)], [1.0 / scale])


def f0_saddle(p: DerivedParams) -> float:
    """Leading saddle-point value of F0 (c0 = 1); valid for eps*chi <= 0.9.

    Raises:
        RegimeError: saddle and pole closer than the saddle form allows
    """
    g = geometry(p)
    gap = 1.0 - g.eps_chi
    if gap < SADDLE_MIN_GAP:
        raise RegimeError(
            f"saddle expansion needs 1 - eps*chi >= {SADDLE_MIN_GAP}, got {gap:.6g}; "
            "use the uniform expansion"
        )
    eps = g.epsilon
    return log_assemble(
        [_saddle_prefactor(g.lam, eps)],
        [math.sqrt((eps - 1.0) / eps) / math.sqrt(2.0 * math.pi * g.lam), 1.0 / gap],
    )


def d0_direct(g: SaddleGeometry) -> float:
    """(2(eps-1)/eps)^(1/2) chi/(1 - eps chi) -/+ chi/p, upper sign for eps chi < 1."""
    s = g.eps_chi - 1.0
    if g.p == 0.0 or s == 0.0:
        raise DomainError("d0 has a removable singularity at eps*chi = 1; use d0_coeff")
    saddle = math.sqrt(2.0 * (g.epsilon - 1.0) / g.epsilon) * g.chi / (-s)
    pole = g.chi / g.p
    return saddle - pole if s < 0.0 else saddle + pole


def d0_coeff(g: SaddleGeometry) -> float:
    """Leading uniform coefficient d0, extrapolated across the coalescence band.

    Inside |eps chi - 1| < COALESCENCE_BAND the value is the cubic through
    d0 at four offsets just outside the band (two on each side).
    """
    if g.regime is not Regime.COALESCED:
        return d0_direct(g)
    s = g.eps_chi - 1.0
    nodes = np.array(_EXTRAPOLATION_NODES)
    values = []
    for node in nodes:
        s_node = node * COALESCENCE_BAND
        chi_node = (1.0 + s_node) / g.epsilon
        values.append(d0_direct(_geometry(g.epsilon, chi_node, g.lam, 1.0 + s_node)))
    coeffs = np.polyfit(nodes, np.array(values), 3)
    logger.debug("d0 extrapolated at eps*chi-1=%.3g from nodes %s", s, values)
    return float(np.polyval(coeffs, s / COALESCENCE_BAND))


def f0_uniform(p: DerivedParams) -> UniformResult:
    """Uniform erfc approximation of F0 truncated after d0.

    erfc_term   = 1/2 G e^{-lam phi(eps)} erfcx(+-sqrt(lam) p)
    saddle_term = 1/2 G e^{-lam phi(eps)} d0 / (chi sqrt(pi lam))

    The erfc argument is +sqrt(lam) p below the coalescence and
    -sqrt(lam) p above it, where e^{-lam phi(1/chi)} erfc(-z) equals
    e^{-lam phi(eps)} erfcx(-z).

    Raises:
        DomainError: invalid geometry
        ScaledOverflowError: pole-dominant exponential out of double range
    """
    g = geometry(p)
    z = math.sqrt(g.lam) * g.p
    if g.eps_chi > 1.0:
        z = -z
    prefactor = _saddle_prefactor(g.lam, g.epsilon)

    d0 = d0_coeff(g)
    erfc_term = log_assemble([prefactor, erfcx_scaled(z)], [0.5])
    saddle_term = log_assemble(
        [prefactor], [0.5, d0, 1.0 / (g.chi * math.sqrt(math.pi * g.lam))]
    )
    flags = ()
    if g.regime is Regime.COALESCED:
        flags = ("coalesced",)
    return UniformResult(
        value=erfc_term + saddle_term,
        regime=g.regime,
        d0=d0,
        erfc_term=erfc_term,
        saddle_term=saddle_term,
        flags=flags,
    )
