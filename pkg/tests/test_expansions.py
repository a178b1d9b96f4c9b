"""Tests for derived parameters, closed-form coefficients and the large-k expansions."""

import math
from fractions import Fraction as Q

import pytest

from hyperasym.errors import DomainError, SingularCoefficientError
from hyperasym.expansions import (
    a_m,
    a_m_first_order,
    c2_coeff,
    c4_coeff,
    c4_prime,
    confluence_pr_check,
    derive_params,
    f_values,
    s_asym,
    s_confluence,
    stirling2,
    theta_moment,
    xi_factor,
    xi_gamma,
    xi_series,
)
from hyperasym.models import Variant
from hyperasym.presets import TABLE1
from hyperasym.series import f_m_spec, iter_terms, s_oracle
from hyperasym.variants import ExpandedAmVariant, UnitTVariant, get_variant


def abs_error(k, x, t, M, variant=None):
    p = derive_params(k, x, t)
    return abs(s_asym(p, M, variant).value - s_oracle(k, x, t).value)


class TestDeriveParams:
    def test_table2_geometry(self):
        p = derive_params(150, Q(45, 100), Q(1, 3))
        assert p.epsilon == 2.0
        assert p.lam == 50.0
        assert p.x_star == 0.75
        assert p.eps_chi == pytest.approx(0.6, rel=1e-15)

    def test_unit_t(self):
        p = derive_params(100, 0.5, 1)
        assert (p.a, p.b, p.c) == (1.0, 0.0, 0.0)
        assert p.X == 0.5
        assert p.epsilon == 1.0

    def test_half(self):
        p = derive_params(100, 0.5, 0.5)
        assert p.a == 0.75
        assert p.c == 0.1875
        assert p.X == pytest.approx(0.75)
        assert p.alpha == pytest.approx(4 * 1.75 / (0.75 * 0.5))

    @pytest.mark.parametrize("t", [0.1, 0.3, 0.5, 0.75, 0.9, 1.0])
    def test_invariants(self, t):
        p = derive_params(50, 0.4, t)
        assert p.a + p.b == pytest.approx(1.0, abs=1e-15)
        assert p.c == pytest.approx(p.a * p.b, abs=1e-15)
        assert 2 * p.a - 1 == pytest.approx(p.t, abs=1e-15)

    def test_coalescence_is_exact_for_rationals(self):
        assert derive_params(150, Q(3, 4), Q(1, 3)).eps_chi == 1.0
        assert derive_params(100, Q(5, 9), Q(1, 5)).eps_chi == 1.0

    @pytest.mark.parametrize(
        "k,x,t", [(0, 0.5, 0.5), (10, 0, 0.5), (10, 1.5, 0.5), (10, 0.5, 0), (10, 0.5, 1.2)]
    )
    def test_domain(self, k, x, t):
        with pytest.raises(DomainError):
            derive_params(k, x, t)


class TestCoefficients:
    def test_c2_at_origin(self):
        a = 0.75
        c = a * (1 - a)
        assert c2_coeff(a, 0.0) == pytest.approx(-(1 + 2 * c) / (12 * c), rel=1e-15)

    def test_c2_value(self):
        # -(1.375)/(2.25) - 0.25/0.625 + 2 * 0.1875 * 0.25 / 0.390625
        assert c2_coeff(0.75, 0.5) == pytest.approx(-11 / 18 - 0.4 + 0.24, rel=1e-14)

    def test_c4_at_origin(self):
        a = 0.6
        c = a * (1 - a)
        assert c4_prime(a, 0.0) == pytest.approx(-(1 + 2 * c) ** 2 / (864 * c * c), rel=1e-14)
        assert c4_coeff(a, 0.0) == pytest.approx((1 + 2 * c) ** 2 / (864 * c * c), rel=1e-14)

    @pytest.mark.parametrize("a,z", [(0.6, 0.3), (0.75, 0.5), (0.9, 0.99)])
    def test_c4_correction(self, a, z):
        c = a * (1 - a)
        gap = c4_prime(a, z) - c4_coeff(a, z)
        assert gap == pytest.approx((1 + 2 * c) / (36 * c) * c2_coeff(a, z), rel=1e-12)

    def test_singular_c(self):
        with pytest.raises(SingularCoefficientError):
            c2_coeff(1.0, 0.5)
        with pytest.raises(DomainError):
            c4_coeff(1.0, 0.5)

    def test_pole_on_saddle(self):
        with pytest.raises(DomainError):
            c2_coeff(0.5, 2.0)


class TestXi:
    def test_gamma_form(self):
        k = 10
        expected = (
            math.gamma(11) / math.gamma(5.5) ** 2
            * (k / (2 * math.pi)) ** -0.5 * 0.5 ** 10
        )
        assert xi_gamma(0.5, k) == pytest.approx(expected, rel=1e-13)

    def test_series_form(self):
        # c = 1/4: 1 + 1.5/(6k) + 2.25/(72 k^2)
        k = 40.0
        assert xi_series(0.5, k) == pytest.approx(1 + 0.25 / k + 0.03125 / k ** 2, rel=1e-15)

    @pytest.mark.parametrize("k", [50, 100, 200, 400])
    def test_forms_differ_at_third_order(self, k):
        # ln Xi = L1/k + L3/k^3; the k^-3 coefficient is L1^3/6 + L3
        a = 0.75
        c = a * (1 - a)
        l1 = (1 + 2 * c) / (24 * c)
        l3 = -(1 / 360 + 7 / 2880 * (a ** -3 + (1 - a) ** -3))
        gap = (xi_factor(a, k, "gamma") - xi_factor(a, k, "series")) * k ** 3
        assert gap == pytest.approx(l1 ** 3 / 6 + l3, rel=0.02)

    def test_unknown_form(self):
        with pytest.raises(DomainError):
            xi_factor(0.5, 10, "tabulated")

    @pytest.mark.parametrize("a,k", [(0.0, 10), (1.0, 10), (0.5, 0)])
    def test_domain(self, a, k):
        with pytest.raises(DomainError):
            xi_gamma(a, k)


class TestPochhammerWeights:
    def test_first_values(self):
        p = derive_params(100, 0.5, 0.5)
        assert a_m(0, p) == 1.0
        assert a_m(1, p) == pytest.approx(75 / 51, rel=1e-15)

    def test_leading_correction(self):
        k, t = 1e4, 0.5
        p = derive_params(k, 0.5, t)
        assert k * (a_m(1, p) * t / p.a - 1) == pytest.approx(-1 / t, abs=1e-3)

    def test_second_order_kappa(self):
        p = derive_params(1000, 0.5, 0.5)
        expected = (p.a / p.t) ** 2 * (1 - p.alpha / (4 * p.k))
        assert a_m_first_order(2, p) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_first_order_error_is_quadratic(self, m):
        gaps = []
        for k in (1000, 2000):
            p = derive_params(k, 0.5, 0.75)
            gaps.append(abs(a_m(m, p) - a_m_first_order(m, p)))
        assert 3.0 < gaps[0] / gaps[1] < 5.0

    def test_negative_order(self):
        with pytest.raises(DomainError):
            a_m(-1, derive_params(10, 0.5, 0.5))


class TestAsymptoticExpansion:
    @pytest.mark.parametrize(
        "k,x,t,M,variant,expected",
        [
            (100, 0.5, 0.75, 0, None, 5.723e-3),
            (100, 0.5, 1, 2, Variant.T_EQUALS_1, 1.315e-5),
            (300, 0.75, 0.5, 1, Variant.EXPANDED_AM, 1.150e-3),
        ],
    )
    def test_published_cells(self, k, x, t, M, variant, expected):
        assert abs_error(k, x, t, M, variant) == pytest.approx(expected, rel=0.01)

    def test_full_first_table(self):
        for (k, x, t), errors in TABLE1:
            variant = Variant.T_EQUALS_1 if t == 1 else Variant.EXPANDED_AM
            for M, expected in enumerate(errors):
                assert abs_error(k, x, t, M, variant) == pytest.approx(expected, rel=0.01)

    def test_terms_sum_to_value(self):
        result = s_asym(derive_params(200, 0.5, 0.5), 2)
        assert len(result.terms) == 3
        assert result.value == pytest.approx(math.fsum(result.terms), rel=1e-15)
        assert result.variant is Variant.EXPANDED_AM

    def test_default_variant_at_unit_t(self):
        assert s_asym(derive_params(200, 0.5, 1), 1).variant is Variant.T_EQUALS_1

    def test_variants_agree_to_third_order(self):
        gaps = []
        for k in (100, 200, 400):
            p = derive_params(k, 0.5, 0.75)
            F = f_values(p, 5)
            exact = s_asym(p, 2, Variant.EXACT_AM, F=F).value
            expanded = s_asym(p, 2, Variant.EXPANDED_AM, F=F).value
            gaps.append(abs(exact - expanded))
        assert 4.0 <= gaps[0] / gaps[1] <= 16.0
        assert 4.0 <= gaps[1] / gaps[2] <= 16.0

    def test_expanded_degenerates_to_unit_t(self):
        p = derive_params(100, 0.5, 1)
        F = (1.3, 1.7, 2.9, 4.1, 5.3)
        A = [1.0] * 5
        expanded, unit = ExpandedAmVariant(), UnitTVariant()
        assert expanded.first_bracket(p, F, A) == pytest.approx(unit.first_bracket(p, F, A))
        assert expanded.second_bracket(p, F, A) == pytest.approx(
            unit.second_bracket(p, F, A), rel=1e-15
        )

    def test_low_kt_is_flagged(self):
        result = s_asym(derive_params(15, 0.5, 0.5), 1)
        assert "kt_below_10" in result.flags
        assert math.isfinite(result.value)

    def test_degenerate_c_reroutes(self):
        result = s_asym(derive_params(1000, 0.5, 1 - 1e-13), 1)
        assert result.variant is Variant.T_EQUALS_1
        assert "degenerate_c" in result.flags

    def test_unsupported_variant(self):
        with pytest.raises(DomainError):
            s_asym(derive_params(100, 0.5, 0.75), 1, Variant.T_EQUALS_1)
        with pytest.raises(DomainError):
            s_asym(derive_params(100, 0.5, 1), 1, Variant.EXPANDED_AM)

    @pytest.mark.parametrize("M", [-1, 3])
    def test_order_range(self, M):
        with pytest.raises(DomainError):
            s_asym(derive_params(100, 0.5, 0.75), M)

    def test_variant_names(self):
        for variant in Variant:
            assert get_variant(variant).get_name()


class TestConfluenceForm:
    @pytest.mark.parametrize("M", [0, 1, 2])
    def test_matches_exact_weights(self, M):
        p = derive_params(100, 0.5, 0.75)
        F = f_values(p, 5)
        confluence = s_confluence(p, M, F)
        exact = s_asym(p, M, Variant.EXACT_AM, F=F)
        assert confluence.value == pytest.approx(exact.value, rel=1e-13)
        assert "confluence" in confluence.flags

    def test_stirling_numbers(self):
        assert [stirling2(4, j) for j in range(5)] == [0, 1, 7, 6, 1]
        assert stirling2(0, 0) == 1
        assert stirling2(3, 5) == 0

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_theta_moment_against_direct_sum(self, m):
        p = derive_params(100, 0.5, 0.75)
        direct = 0.0
        for r, term in enumerate(iter_terms(f_m_spec(0, p, 1e-20))):
            direct += r ** m * term
            if r > 20 and r ** m * term < 1e-22 * direct:
                break
        assert theta_moment(m, p) == pytest.approx(direct, rel=1e-12)

    def test_pr_trivial_orders(self):
        assert confluence_pr_check(0, 0.75, 100) == (1.0, 1.0)
        exact, _ = confluence_pr_check(1, 0.75, 100)
        assert exact == pytest.approx(75.5 / (0.75 * 101), rel=1e-15)

    @pytest.mark.parametrize("r", [1, 2])
    def test_pr_low_orders_closed(self, r):
        # second-order expansion is exact up to k^-3
        a, k = 0.6, 1e4
        exact, expanded = confluence_pr_check(r, a, k)
        assert abs(exact - expanded) < 1e-9

    def test_pr_error_is_cubic(self):
        scaled = []
        for k in (1e3, 1e4, 1e5):
            exact, expanded = confluence_pr_check(3, 0.75, k)
            scaled.append(k ** 3 * abs(exact - expanded))
        assert scaled[1] == pytest.approx(scaled[0], rel=0.1)
        assert scaled[2] == pytest.approx(scaled[0], rel=0.5)

    def test_pr_domain(self):
        with pytest.raises(DomainError):
            confluence_pr_check(-1, 0.5, 100)
        with pytest.raises(DomainError):
            confluence_pr_check(4, 0.5, 100)
