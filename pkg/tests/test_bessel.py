"""Bessel series, the algebraic constants, and the closed-form triple."""

from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from disksig.balls import ComplexBall, RealBall, mpf_to_fraction
from disksig.bessel import (abc_closed_form, bessel_j,
                            bessel_tail_bound, d_lambda,
                            d_lambda_determinant, make_constants,
                            numerator_im, ode_residual, remark_product,
                            series_terms)

CONSTS = make_constants(128)

small_rats = st.fractions(min_value=-3, max_value=3, max_denominator=40)


def mp_oracle(nu, re_q, im_q) -> tuple:
    """High-precision reference value of J_nu, as exact rationals."""
    with mpmath.workprec(250):
        val = mpmath.besselj(nu, mpmath.mpf(re_q.numerator) / re_q.denominator
                             + mpmath.mpf(im_q.numerator) / im_q.denominator
                             * 1j)
        return (mpf_to_fraction(val.real._mpf_),
                mpf_to_fraction(val.imag._mpf_))


def test_constants_satisfy_the_quartic():
    z2 = CONSTS.zeta.mul(CONSTS.zeta)
    resid = z2.mul(z2).add(z2).add(ComplexBall.from_rationals(F(2), F(0)))
    assert resid.contains(F(0), F(0))
    assert resid.re.rad_fraction() < F(1, 2 ** 64)
    assert resid.im.rad_fraction() < F(1, 2 ** 64)


def test_constants_location_and_norms():
    assert CONSTS.zeta.re.is_positive()
    assert CONSTS.zeta.im.is_positive()
    # |zeta|^2 = sqrt(2) and |alpha|^2 = sqrt(2), checked by squaring
    for w in (CONSTS.zeta, CONSTS.alpha):
        sq = w.abs2().sqr()
        assert sq.contains(F(2))
    # alpha zeta = (-5 + i sqrt(7))/4, checked as (4 alpha zeta + 5)^2 = -7
    az4 = CONSTS.alpha.mul(CONSTS.zeta).mul_2exp(2)
    shifted = az4.add(ComplexBall.from_rationals(F(5), F(0)))
    assert shifted.mul(shifted).contains(F(-7), F(0))


def test_make_constants_rejects_low_precision():
    with pytest.raises(ValueError):
        make_constants(40)


def test_bessel_at_zero():
    zero = ComplexBall.zero()
    j0 = bessel_j(0, zero)
    j1 = bessel_j(1, zero)
    assert j0.contains(F(1), F(0))
    assert j1.contains(F(0), F(0))


@pytest.mark.parametrize("nu,re_q,im_q", [
    (0, F(3, 2), F(0)),
    (0, F(-7, 3), F(1, 2)),
    (1, F(1, 5), F(0)),
    (1, F(2), F(-3, 2)),
    (0, F(19, 7), F(19, 7)),
])
def test_bessel_matches_independent_oracle(nu, re_q, im_q):
    ball = bessel_j(nu, ComplexBall.from_rationals(re_q, im_q))
    want_re, want_im = mp_oracle(nu, re_q, im_q)
    # the oracle itself carries ~2^-250 error, negligible next to rad
    slack = F(1, 10 ** 50)
    assert ball.re.inflate(slack).contains(want_re)
    assert ball.im.inflate(slack).contains(want_im)


def test_truncated_series_still_encloses():
    """With n_terms forced low the tail bound must absorb the remainder."""
    x = ComplexBall.from_rationals(F(446, 125), F(0))  # 3.568
    want_re, want_im = mp_oracle(0, F(446, 125), F(0))
    for n in (5, 8, 12):
        ball = bessel_j(0, x, n_terms=n)
        assert ball.re.inflate(F(1, 10 ** 50)).contains(want_re)
        assert ball.im.inflate(F(1, 10 ** 50)).contains(want_im)


def test_tail_bound_fixture():
    x = ComplexBall.from_rationals(F(446, 125), F(0))
    tail = bessel_tail_bound(x, 5)
    assert tail.upper() <= F(25, 1000)
    assert tail.upper() > 0


def test_tail_bound_rejects_huge_argument():
    x = ComplexBall.from_rationals(F(100), F(0))
    with pytest.raises(ValueError):
        bessel_tail_bound(x, 2)


@given(small_rats, small_rats)
@settings(max_examples=100, deadline=None)
def test_conjugate_symmetry(re_q, im_q):
    """J_nu(conj x) = conj(J_nu(x)): enclosures must overlap mirrored."""
    x = ComplexBall.from_rationals(re_q, im_q)
    for nu in (0, 1):
        a = bessel_j(nu, x)
        b = bessel_j(nu, x.conj())
        assert a.re.lower() <= b.re.upper() and b.re.lower() <= a.re.upper()
        mirrored = b.im.neg()
        assert (a.im.lower() <= mirrored.upper()
                and mirrored.lower() <= a.im.upper())


def test_remark_products_match_pinned_decimals():
    targets = [
        (F(141, 50), F("-13.208370024264"), F("-0.003639973760")),
        (F(283, 100), F("-13.424373315124"), F("0.005782411521")),
    ]
    for lam, want_re, want_im in targets:
        prod = remark_product(lam, CONSTS)
        for ball, want in ((prod.re, want_re), (prod.im, want_im)):
            gap = max(ball.lower() - want, want - ball.upper(), F(0))
            assert gap < F(1, 10 ** 9)


def test_pairing_signs_at_bracket_endpoints():
    assert d_lambda(F(5, 2), CONSTS).upper() < F(-6, 100)
    assert d_lambda(F(3), CONSTS).lower() > F(3, 100)


@pytest.mark.parametrize("lam", [F(1, 2), F(3, 2), F(5, 2), F(141, 50), F(3)])
def test_pairing_two_routes_overlap(lam):
    a = d_lambda(lam, CONSTS)
    b = d_lambda_determinant(lam, CONSTS)
    assert a.lower() <= b.upper() and b.lower() <= a.upper()
    assert a.rad_fraction() < F(1, 10 ** 30)


def test_numerator_interval_argument():
    lam = RealBall.from_interval(F(282, 100), F(283, 100))
    num = numerator_im(lam, CONSTS)
    assert num.is_negative()


def test_series_terms_grows_with_precision():
    lo = series_terms(F(3), make_constants(64), 64)
    hi = series_terms(F(3), CONSTS, 128)
    assert lo < hi


def test_closed_form_boundary_values():
    a_val, b_val, c_val = abc_closed_form(F(1), F(1), CONSTS)
    assert c_val.contains(F(1))
    assert a_val.contains(F(0))
    assert b_val.mid_fraction() == 0 and b_val.rad_fraction() == 0
    # and C is exactly 1 at the boundary for a second lambda
    _, _, c2 = abc_closed_form(F(2), F(1), CONSTS)
    assert c2.contains(F(1))


def test_closed_form_rejects_bad_radius_and_pole():
    with pytest.raises(ValueError):
        abc_closed_form(F(1), F(3, 2), CONSTS)
    lam = RealBall.from_interval(F(282, 100), F(283, 100))
    with pytest.raises(ValueError, match="pole"):
        abc_closed_form(lam, F(1, 2), CONSTS)


@pytest.mark.parametrize("lam,r", [(F(1), F(1, 2)), (F(1, 2), F(3, 4)),
                                   (F(2), F(1, 4))])
def test_ode_residuals_vanish_to_difference_order(lam, r):
    h = F(1, 10 ** 4)
    res = ode_residual(lam, r, h, CONSTS)
    for component in res:
        assert component.upper() < F(1, 10 ** 5)
