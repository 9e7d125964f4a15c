"""Closed-form constants against frozen oracle values and cross-derivations.

Oracle values were computed once with mpmath at 40+ digits (independent
scripts, not the package code) and are frozen here as literals.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksl import (
    Dimensions,
    DomainError,
    constants_report,
    cs_bm,
    cs_general,
    epsilon_max,
    f_of_k,
    k_interval,
    k_lower_bound_eps0,
    lambda1_coefficient,
    spectral_lambda_bound,
    optimize_k,
    riemannian_constants,
    base_threshold,
    x_bounds,
)

# Frozen oracles (mpmath, 40 digits, rounded to double).
CS_22 = 0.5669872981077807
K_LO_22 = 0.2679491924311227  # 2 - sqrt(3)
K_HI_22 = 3.732050807568877  # 2 + sqrt(3)
THRESHOLD_22 = 0.8818539703952119  # 1/(2*CS_22)
EPS_MAX_22 = 1.3944487245360107
X_MERGE_22 = 0.7559830641437073  # (4 - sqrt(3))/3


def dims(n, q):
    return Dimensions(n=n, q=q)


class TestDimensions:
    def test_m_is_twice_n(self):
        assert dims(3, 1.2).m == 6

    def test_rejects_q_below_one(self):
        with pytest.raises(DomainError):
            dims(2, 1.0)
        with pytest.raises(DomainError):
            dims(2, 0.5)

    def test_rejects_supercritical_q(self):
        with pytest.raises(DomainError):
            dims(2, 3.001)
        with pytest.raises(DomainError):
            dims(3, 2.1)

    def test_rejects_bad_n(self):
        with pytest.raises(DomainError):
            dims(0, 2.0)

    def test_boundary_flag(self):
        assert dims(2, 3.0).boundary
        assert dims(3, 2.0).boundary
        assert not dims(2, 2.0).boundary
        assert not dims(1, 7.0).boundary

    def test_n1_has_no_upper_bound(self):
        assert dims(1, 100.0).q == 100.0


class TestCsBm:
    def test_oracle_n2_q2(self):
        assert cs_bm(dims(2, 2.0)) == pytest.approx(CS_22, abs=1e-15)

    def test_equals_one_minus_quarter_sqrt3(self):
        assert cs_bm(dims(2, 2.0)) == pytest.approx(1 - math.sqrt(3) / 4, abs=1e-15)

    def test_n1_collapses_to_half_q_minus_1(self):
        for q in (1.1, 1.5, 2.0, 3.0, 5.0):
            assert cs_bm(dims(1, q)) == pytest.approx((q - 1) / 2, abs=1e-12)

    def test_vanishes_as_q_to_1(self):
        assert cs_bm(dims(3, 1.0 + 1e-9)) == pytest.approx(0.0, abs=1e-8)

    def test_boundary_exponent_accepted(self):
        # radicand vanishes; value (q-1)(2n+q+2)/(2qn) = 2*9/12 at n=2,q=3
        assert cs_bm(dims(2, 3.0)) == pytest.approx(1.5, abs=1e-12)


class TestRiemannian:
    def test_m4_q2(self):
        raw, bridged = riemannian_constants(dims(2, 2.0))
        assert raw == pytest.approx(0.25, abs=1e-15)
        assert bridged == pytest.approx(0.75, abs=1e-15)

    def test_m2_q3(self):
        raw, bridged = riemannian_constants(dims(1, 3.0))
        assert raw == pytest.approx(1.0, abs=1e-15)
        assert bridged == pytest.approx((3 - 1) * (2 - 1) / 2, abs=1e-15)

    def test_raw_vanishes_as_q_to_1(self):
        raw, _ = riemannian_constants(dims(4, 1.0 + 1e-12))
        assert raw == pytest.approx(0.0, abs=1e-12)

    def test_rejects_q_beyond_m_range(self):
        with pytest.raises(DomainError):
            riemannian_constants(dims(2, 3.5))


class TestKInterval:
    def test_oracle_n2_q2(self):
        iv = k_interval(dims(2, 2.0))
        assert iv.k_lo == pytest.approx(K_LO_22, abs=1e-15)
        assert iv.k_hi == pytest.approx(K_HI_22, abs=1e-14)

    def test_degenerate_at_boundary(self):
        iv = k_interval(dims(2, 3.0))
        assert iv.k_lo == pytest.approx(1.0, abs=1e-12)
        assert iv.k_hi == pytest.approx(1.0, abs=1e-12)

    def test_product_one(self):
        for n, q in [(2, 2.0), (3, 1.5), (4, 1.2), (6, 1.1)]:
            iv = k_interval(dims(n, q))
            assert iv.k_lo * iv.k_hi == pytest.approx(1.0, abs=1e-12)

    def test_endpoints_are_quadratic_roots(self):
        # independent derivation: roots of k^2 + (2 - 4(n+1)/((n-1)q))k + 1
        for n, q in [(2, 2.0), (3, 1.5), (5, 1.3)]:
            iv = k_interval(dims(n, q))
            b = 2 - 4 * (n + 1) / ((n - 1) * q)
            for k in (iv.k_lo, iv.k_hi):
                assert k * k + b * k + 1 == pytest.approx(0.0, abs=1e-12)

    def test_n1_domain_error_message(self):
        with pytest.raises(DomainError, match="interval unbounded at n = 1; use limit semantics"):
            k_interval(dims(1, 2.0))


class TestLambda1Coefficient:
    def test_vanishes_at_lower_endpoint(self):
        assert lambda1_coefficient(dims(2, 2.0), K_LO_22) == pytest.approx(0.0, abs=1e-10)

    def test_vanishes_at_upper_endpoint(self):
        assert lambda1_coefficient(dims(2, 2.0), K_HI_22) == pytest.approx(0.0, abs=1e-10)

    def test_hand_value_k1(self):
        # 1 - (2+1)(2+1)*2/((16+8+2)*1) = 1 - 18/26 = 4/13
        assert lambda1_coefficient(dims(2, 2.0), 1.0) == pytest.approx(4 / 13, abs=1e-14)

    def test_negative_outside_interval(self):
        assert lambda1_coefficient(dims(2, 2.0), 10.0) < 0
        assert lambda1_coefficient(dims(2, 2.0), 0.01) < 0

    def test_rejects_nonpositive_k(self):
        with pytest.raises(DomainError):
            lambda1_coefficient(dims(2, 2.0), 0.0)


class TestFOfK:
    def test_hand_value(self):
        # (1/(q-1)) * (4/13 * 1 + 2*2*3/26) = 4/13 + 6/13 = 10/13
        assert f_of_k(dims(2, 2.0), 1.0, 1.0) == pytest.approx(10 / 13, abs=1e-14)

    def test_at_lower_endpoint_equals_threshold(self):
        assert f_of_k(dims(2, 2.0), K_LO_22, 1.0) == pytest.approx(THRESHOLD_22, abs=1e-10)

    def test_reciprocal_relation(self):
        for k, lam1 in [(0.5, 1.0), (1.0, 2.0), (2.0, 5.0), (3.0, 1.3)]:
            f = f_of_k(dims(2, 2.0), k, lam1)
            c = cs_general(dims(2, 2.0), k, lam1)
            assert f * 2 * c == pytest.approx(1.0, abs=1e-12)

    def test_rejects_k_outside_interval(self):
        with pytest.raises(DomainError):
            f_of_k(dims(2, 2.0), 5.0, 1.0)


class TestCsGeneral:
    def test_independent_of_lambda1_at_k_lo(self):
        vals = [cs_general(dims(2, 2.0), K_LO_22, lam1) for lam1 in (1.0, 2.0, 5.0)]
        assert max(vals) - min(vals) < 1e-10
        for v in vals:
            assert v == pytest.approx(CS_22, abs=1e-10)

    def test_hand_value_k1(self):
        # 1/C = 2*(4/13 + 6/13) = 20/13
        assert cs_general(dims(2, 2.0), 1.0, 1.0) == pytest.approx(13 / 20, abs=1e-14)

    def test_n1_domain_error(self):
        with pytest.raises(DomainError):
            cs_general(dims(1, 2.0), 1.0, 1.0)


def brute_force_threshold(n, q, lam1, npts=1_000_000):
    """Independent float-grid oracle for optimize_k."""
    import numpy as np

    iv = k_interval(dims(n, q))
    ks = np.linspace(iv.k_lo, iv.k_hi, npts)
    coef = 1 - (n + (n - 1) * ks) * (ks * n + n - 1) * q / ((4 * n**2 + 4 * n + q) * ks)
    f = (coef * lam1 + q * n * (ks * n + n - 1) / ((4 * n**2 + 4 * n + q) * ks)) / (q - 1)
    i = int(np.argmax(f))
    return float(ks[i]), float(f[i])


class TestOptimizeK:
    def test_n2_q2_lam1(self):
        k_star, threshold = optimize_k(dims(2, 2.0), 1.0)
        assert k_star == pytest.approx(2 - math.sqrt(3), abs=1e-6)
        # with lambda1 = 1 the objective is (12-2k)/13, strictly decreasing
        assert threshold == pytest.approx(THRESHOLD_22, abs=1e-12)
        _, grid_threshold = brute_force_threshold(2, 2.0, 1.0)
        assert threshold == pytest.approx(grid_threshold, abs=1e-8)

    def test_against_grid_oracle_lam2(self):
        k_star, threshold = optimize_k(dims(2, 2.0), 2.0)
        grid_k, grid_threshold = brute_force_threshold(2, 2.0, 2.0)
        assert threshold == pytest.approx(grid_threshold, abs=1e-6)
        assert k_star == pytest.approx(grid_k, abs=1e-4)

    def test_degenerate_interval(self):
        k_star, _ = optimize_k(dims(2, 3.0), 1.0)
        assert k_star == pytest.approx(1.0, abs=1e-12)

    def test_never_below_k_lo_value(self):
        for n, q, lam1 in [(2, 2.0, 1.0), (3, 1.5, 2.0), (4, 1.3, 5.0), (2, 1.7, 1.0)]:
            iv = k_interval(dims(n, q))
            _, threshold = optimize_k(dims(n, q), lam1)
            assert threshold >= f_of_k(dims(n, q), iv.k_lo, lam1) - 1e-10

    def test_n1_domain_error(self):
        with pytest.raises(DomainError):
            optimize_k(dims(1, 2.0), 1.0)


class TestEpsilonMax:
    def test_oracle_n2_q2(self):
        assert epsilon_max(dims(2, 2.0)) == pytest.approx(EPS_MAX_22, abs=1e-14)

    def test_zero_at_boundary(self):
        assert epsilon_max(dims(2, 3.0)) == 0.0

    def test_limit_near_q1(self):
        v = epsilon_max(dims(2, 1.0001))
        assert 5.99 < v < 6.0

    def test_n1_domain_error(self):
        with pytest.raises(DomainError):
            epsilon_max(dims(1, 2.0))


class TestKLowerBoundEps0:
    def test_oracle_n2_q2(self):
        assert k_lower_bound_eps0(dims(2, 2.0)) == pytest.approx(2 - math.sqrt(3), abs=1e-14)

    def test_boundary_value_one(self):
        assert k_lower_bound_eps0(dims(2, 3.0)) == pytest.approx(1.0, abs=1e-12)

    def test_matches_interval_lower_endpoint(self):
        for n, q in [(2, 2.0), (3, 1.5), (4, 1.2), (5, 1.4), (6, 1.15)]:
            assert k_lower_bound_eps0(dims(n, q)) == pytest.approx(
                k_interval(dims(n, q)).k_lo, abs=1e-12
            )

    def test_n1_domain_error(self):
        with pytest.raises(DomainError):
            k_lower_bound_eps0(dims(1, 2.0))


class TestBaseThreshold:
    def test_oracle_n2_q2(self):
        assert base_threshold(dims(2, 2.0)) == pytest.approx(THRESHOLD_22, abs=1e-14)

    def test_boundary_third(self):
        assert base_threshold(dims(2, 3.0)) == pytest.approx(1 / 3, abs=1e-12)
        assert cs_bm(dims(2, 3.0)) == pytest.approx(1.5, abs=1e-12)

    def test_grid_agreement_with_cs_bm(self):
        count = 0
        for n in range(2, 7):
            qmax = (n + 1) / (n - 1)
            for i in range(1, 21):
                q = 1 + (qmax - 1) * i / 21
                t = base_threshold(dims(n, q))
                assert t == pytest.approx(1 / (2 * cs_bm(dims(n, q))), abs=1e-10)
                count += 1
        assert count == 100


class TestXBounds:
    def test_hand_values_k1(self):
        x_lo, x_hi = x_bounds(dims(2, 2.0), 1.0)
        assert x_lo == pytest.approx(1.0, abs=1e-14)
        assert x_hi == pytest.approx(13 / 9, abs=1e-14)

    def test_merge_at_interval_endpoint(self):
        x_lo, x_hi = x_bounds(dims(2, 2.0), K_LO_22)
        assert x_lo == pytest.approx(X_MERGE_22, abs=1e-10)
        assert x_hi == pytest.approx(X_MERGE_22, abs=1e-10)

    def test_infeasible_outside_interval(self):
        x_lo, x_hi = x_bounds(dims(2, 2.0), 5.0)
        assert x_lo > x_hi

    def test_ordering_tracks_interval(self):
        iv = k_interval(dims(3, 1.5))
        for k in (iv.k_lo * 1.01, 1.0, iv.k_hi * 0.99):
            x_lo, x_hi = x_bounds(dims(3, 1.5), k)
            assert x_lo <= x_hi


class TestLambdaBoundStar3:
    def test_at_x_hi_equals_f_of_k(self):
        for k in (0.5, 1.0, 2.0):
            _, x_hi = x_bounds(dims(2, 2.0), k)
            assert spectral_lambda_bound(dims(2, 2.0), k, x_hi, 1.0) == pytest.approx(
                f_of_k(dims(2, 2.0), k, 1.0), abs=1e-12
            )

    def test_hand_value_at_x_lo(self):
        # 1/(q-1) + (1 - 3/2)*4/(2*3*1) = 1 - 1/3 = 2/3
        assert spectral_lambda_bound(dims(2, 2.0), 1.0, 1.0, 1.0) == pytest.approx(
            2 / 3, abs=1e-14
        )

    def test_monotone_in_x_for_large_lambda1(self):
        x_lo, x_hi = x_bounds(dims(2, 2.0), 1.0)
        xs = [x_lo + (x_hi - x_lo) * i / 10 for i in range(11)]
        vals = [spectral_lambda_bound(dims(2, 2.0), 1.0, x, 1.0) for x in xs]
        assert all(b >= a - 1e-14 for a, b in zip(vals, vals[1:]))

    def test_rejects_x_outside_range(self):
        with pytest.raises(DomainError):
            spectral_lambda_bound(dims(2, 2.0), 1.0, 0.5, 1.0)


class TestConstantsReport:
    def test_fields_n2_q2(self):
        rep = constants_report(dims(2, 2.0))
        assert rep.c_s == pytest.approx(CS_22, abs=1e-14)
        assert rep.c_riem_bridged == pytest.approx(0.75, abs=1e-15)
        assert rep.c_conj == pytest.approx(0.5, abs=1e-15)
        assert rep.lambda1_lower == pytest.approx(1 / (2 * CS_22), abs=1e-12)

    def test_ordering_sweep(self):
        # c_conj <= c_s <= c_riem_bridged, strict for n >= 2; lambda1_lower <= 1
        total = 0
        for n in range(2, 7):
            qmax = (n + 1) / (n - 1)
            for i in range(1, 41):
                q = 1 + (qmax - 1) * i / 41.5
                rep = constants_report(dims(n, q))
                assert rep.c_conj < rep.c_s < rep.c_riem_bridged
                assert rep.lambda1_lower <= 1 + 1e-12
                total += 1
        assert total == 200

    def test_equality_at_n1(self):
        rep = constants_report(dims(1, 2.0))
        assert rep.c_s == pytest.approx(rep.c_conj, abs=1e-12)


@st.composite
def admissible_dims(draw):
    n = draw(st.integers(min_value=2, max_value=8))
    frac = draw(st.fractions(Fraction(1, 100), Fraction(99, 100)))
    q = 1 + float(frac) * ((n + 1) / (n - 1) - 1)
    return dims(n, q)


@given(admissible_dims())
@settings(max_examples=60, deadline=None)
def test_property_endpoint_product_and_cross_derivation(d):
    iv = k_interval(d)
    assert iv.k_lo * iv.k_hi == pytest.approx(1.0, abs=1e-12)
    assert 0 < iv.k_lo <= iv.k_hi
    assert k_lower_bound_eps0(d) == pytest.approx(iv.k_lo, abs=1e-12)
    assert base_threshold(d) == pytest.approx(1 / (2 * cs_bm(d)), abs=1e-10)


@given(admissible_dims(), st.floats(min_value=1.0, max_value=6.0))
@settings(max_examples=40, deadline=None)
def test_property_threshold_at_least_k_lo_value(d, lam1):
    iv = k_interval(d)
    _, threshold = optimize_k(d, lam1)
    assert threshold >= f_of_k(d, iv.k_lo, lam1) - 1e-10
