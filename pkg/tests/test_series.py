"""Tests for direct hypergeometric summation."""

import math
from fractions import Fraction as Q

import mpmath
import pytest

from hyperasym.errors import ConvergenceError, DomainError
from hyperasym.expansions import derive_params
from hyperasym.kernels import log_gamma
from hyperasym.models import SeriesSpec, SeriesStatus
from hyperasym.series import (
    f_m,
    f_m_spec,
    iter_terms,
    s_oracle,
    sum_hypergeometric,
    term_ratio,
)


def fraction_partial_sum(num, den, z, terms):
    """Exact rational partial sum of a hypergeometric series."""
    total = Q(0)
    term = Q(1)
    for r in range(terms):
        total += term
        ratio = z
        for alpha in num:
            ratio *= r + alpha
        ratio /= r + 1
        for beta in den:
            ratio /= r + beta
        term *= ratio
    return total


def log_pochhammer(alpha, r):
    return log_gamma(alpha + r) - log_gamma(alpha)


class TestOracle:
    def test_zero_argument(self):
        result = s_oracle(100, 0, 0.5)
        assert result.value == 1.0
        assert result.terms_used == 1
        assert result.converged

    @pytest.mark.parametrize("k", [10, 20, 50])
    def test_gauss_sum_at_t_zero(self, k):
        result = s_oracle(k, 1, 0)
        assert result.converged
        assert result.value == pytest.approx(2.0 ** k, rel=1e-8)

    def test_greater_than_one_and_increasing(self):
        values = [s_oracle(50, x / 10, 0.5).value for x in range(1, 10)]
        assert values[0] > 1.0
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_tolerance_stability(self):
        coarse = s_oracle(100, 0.5, 0.75, rel_tol=1e-12).value
        fine = s_oracle(100, 0.5, 0.75, rel_tol=1e-14).value
        assert coarse == pytest.approx(fine, rel=1e-11)

    def test_against_mpmath(self):
        mpmath.mp.dps = 40
        ak = mpmath.mpf(87.5)
        ref = mpmath.hyp3f2(1, ak, ak + 0.5, 76, 101, mpmath.mpf("0.5"))
        assert s_oracle(100, 0.5, 0.75).value == pytest.approx(float(ref), rel=1e-13)

    def test_tail_bound_below_tolerance(self):
        result = s_oracle(200, 0.75, 0.5, rel_tol=1e-16)
        assert result.converged
        assert result.tail_bound <= 1e-16
        assert result.peak_index == 0

    @pytest.mark.parametrize(
        "k,x,t", [(0, 0.5, 0.5), (-5, 0.5, 0.5), (10, 1.5, 0.5), (10, -0.1, 0.5), (10, 0.5, 1.2)]
    )
    def test_domain(self, k, x, t):
        with pytest.raises(DomainError):
            s_oracle(k, x, t)


class TestGaussFunctions:
    def test_exact_rational_f0(self):
        p = derive_params(100, Q(1, 2), Q(3, 4))
        reference = fraction_partial_sum((1, Q(175, 2)), (76,), Q(7, 16), 200)
        assert f_m(0, p).value == pytest.approx(float(reference), rel=1e-14)

    def test_closed_form_f2(self):
        # 2F1(3, 5; 5; 3/8) = (5/8)^-3
        p = derive_params(4, Q(1, 2), Q(1, 2))
        result = f_m(2, p)
        assert result.value == pytest.approx(4.096, rel=1e-14)
        reference = fraction_partial_sum((3, 5), (5,), Q(3, 8), 400)
        assert result.value == pytest.approx(float(reference), rel=1e-14)

    @pytest.mark.parametrize("r", [1, 5, 17])
    def test_terms_match_pochhammer_form(self, r):
        p = derive_params(20, 0.6, 0.5)
        spec = f_m_spec(0, p, 1e-20)
        terms = iter_terms(spec)
        for _ in range(r):
            next(terms)
        term = next(terms)
        log_expected = (
            log_pochhammer(1.0, r) + log_pochhammer(p.a * p.k, r)
            - log_pochhammer(p.t * p.k + 1.0, r) - log_gamma(r + 1.0)
            + r * math.log(p.chi)
        )
        assert term == pytest.approx(math.exp(log_expected), rel=1e-12)

    def test_derivative_identity(self):
        # d^m/dchi^m F0 = m! A_m F_m at fixed (k, t)
        k, t, chi = 100, 0.75, 0.4
        a = 0.5 * (1 + t)
        h = 1e-3

        def f0(c):
            return f_m(0, derive_params(k, c / a, t)).value

        values = {j: f0(chi + j * h) for j in (-2, -1, 0, 1, 2)}
        first = (-values[2] + 8 * values[1] - 8 * values[-1] + values[-2]) / (12 * h)
        second = (
            -values[2] + 16 * values[1] - 30 * values[0] + 16 * values[-1] - values[-2]
        ) / (12 * h * h)

        p = derive_params(k, chi / a, t)
        a1 = p.a * p.k / (p.t * p.k + 1)
        a2 = a1 * (p.a * p.k + 1) / (p.t * p.k + 2)
        assert first == pytest.approx(a1 * f_m(1, p).value, rel=1e-8)
        assert second == pytest.approx(2 * a2 * f_m(2, p).value, rel=1e-7)

    def test_derivative_identity_mpmath(self):
        mpmath.mp.dps = 30
        k, t, chi = 100, 0.75, 0.4
        a = 0.5 * (1 + t)
        p = derive_params(k, chi / a, t)
        deriv = mpmath.diff(
            lambda c: mpmath.hyp2f1(1, mpmath.mpf(p.a * p.k), p.t * p.k + 1, c),
            mpmath.mpf(p.chi),
        )
        a1 = p.a * p.k / (p.t * p.k + 1)
        assert a1 * f_m(1, p).value == pytest.approx(float(deriv), rel=1e-13)

    def test_negative_order(self):
        p = derive_params(10, 0.5, 0.5)
        with pytest.raises(DomainError):
            f_m(-1, p)

    def test_diverges_at_unit_chi(self):
        p = derive_params(100, 1, 1)
        with pytest.raises(DomainError):
            f_m(0, p)


class TestSumHypergeometric:
    def test_term_ratio(self):
        spec = SeriesSpec((1.0, 2.0), (3.0,), 0.5, 1e-16, 100)
        assert term_ratio(spec, 0) == pytest.approx(0.5 * 2.0 / 3.0)
        assert term_ratio(spec, 4) == pytest.approx(0.5 * 5.0 * 6.0 / (5.0 * 7.0))

    def test_geometric_series(self):
        result = sum_hypergeometric(SeriesSpec((1.0,), (), 0.5, 1e-18, 1000))
        assert result.value == pytest.approx(2.0, rel=1e-15)

    def test_term_cap(self):
        result = sum_hypergeometric(SeriesSpec((1.0,), (), 0.999, 1e-20, 10))
        assert result.status is SeriesStatus.TERM_CAP_HIT
        assert not result.converged
        assert result.terms_used == 10
        assert result.tail_bound > 1e-20

    @pytest.mark.parametrize("argument", [1.0, 0.9])
    def test_ratio_rising_after_peak(self, argument):
        spec = SeriesSpec((0.001, 50.0, 50.0), (1.0, 100.0), argument, 1e-12, 1000)
        with pytest.raises(ConvergenceError):
            sum_hypergeometric(spec)

    def test_too_many_numerator_params(self):
        with pytest.raises(DomainError):
            sum_hypergeometric(SeriesSpec((1.0, 2.0, 3.0), (4.0,), 0.5, 1e-16, 100))

    def test_unit_argument_needs_positive_excess(self):
        with pytest.raises(DomainError):
            sum_hypergeometric(SeriesSpec((1.0, 2.0), (3.0,), 1.0, 1e-9, 1000))

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"rel_tol": 1e-2},
            {"rel_tol": 1e-40},
            {"max_terms": 5},
            {"denominator_params": (0.0,)},
            {"argument": 1.5},
        ],
    )
    def test_spec_validation(self, kwargs):
        base = dict(
            numerator_params=(1.0,), denominator_params=(2.0,), argument=0.5,
            rel_tol=1e-16, max_terms=100,
        )
        base.update(kwargs)
        with pytest.raises(DomainError):
            SeriesSpec(**base)
