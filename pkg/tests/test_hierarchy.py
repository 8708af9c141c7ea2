"""PDE hierarchy: Poisson solver, exact levels, radial reduction, ratios."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from disksig.balls import RealBall
from disksig.exactpoly import Poly2, boundary_trace, laplacian
from disksig.hierarchy import (a_coefficients, dev_coefficient, level_norms,
                               radial_levels, radial_levels_ball,
                               radius_estimate, solve_poisson_zero_bd,
                               developed_checks, tensor_checks)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=16)


def poly_strategy(max_terms=4, max_deg=5):
    term = st.tuples(st.integers(0, max_deg), st.integers(0, max_deg),
                     rationals)
    return st.lists(term, max_size=max_terms).map(
        lambda ts: sum((Poly2.monomial(i, j, v) for i, j, v in ts),
                       Poly2.zero()))


@given(poly_strategy())
@settings(max_examples=100, deadline=None)
def test_poisson_solver_solves_and_vanishes_on_circle(f):
    u = solve_poisson_zero_bd(f)
    assert laplacian(u) == f
    assert boundary_trace(u).is_zero()


def test_poisson_solver_linear_source():
    # Delta u = x with zero boundary data has u = x (x^2 + y^2 - 1)/8
    x = Poly2.monomial(1, 0)
    y = Poly2.monomial(0, 1)
    want = x * (x * x + y * y - 1) * F(1, 8)
    assert solve_poisson_zero_bd(x) == want


def test_first_levels_are_the_known_solutions(state):
    x = Poly2.monomial(1, 0)
    y = Poly2.monomial(0, 1)
    disk = Poly2.const(1) - x * x - y * y
    # pi_1 = 0, pi_2 = (1 - |z|^2)/4 (e11 + e22)
    assert all(e.is_zero() for e in state.tensor(1).entries)
    t2 = state.tensor(2)
    assert t2.entry("11") == disk * F(1, 4)
    assert t2.entry("22") == disk * F(1, 4)
    assert t2.entry("12").is_zero()
    assert t2.entry("21").is_zero()
    # developed: V_2 = (0, 0, (1 - |z|^2)/2)
    v2 = state.developed(2)
    assert v2.c1.is_zero() and v2.c2.is_zero()
    assert v2.c3 == disk * F(1, 2)


def test_exactness_checks_small_levels(state):
    for n in range(1, 9):
        assert tensor_checks(state, n) == {"residual_ok": True,
                                           "boundary_ok": True}
        assert developed_checks(state, n) == {"residual_ok": True,
                                              "boundary_ok": True}


def test_a_coefficients_fixtures(state):
    a_vals = a_coefficients(state, 8)
    assert a_vals[0] == 1
    assert a_vals[2] == F(1, 2)
    assert a_vals[4] == F(1, 16)
    assert a_vals[6] == F(1, 192)
    assert a_vals[8] == F(11, 18432)
    assert a_vals[1] == a_vals[3] == a_vals[5] == a_vals[7] == 0


def test_dev_coefficient_off_origin(state):
    val = dev_coefficient(state, 2, (F(1, 2), F(0)))
    assert val == (0, 0, F(3, 8))


def test_radial_reduction_matches_bivariate(state):
    """On the positive x-axis, V_n = (A_n(r), 0, C_n(r)) exactly."""
    a_list, c_list = radial_levels(10)
    for n in range(11):
        for r in (F(0), F(1, 3), F(3, 4), F(1)):
            a_val = sum((coef * r ** m for m, coef in a_list[n].items()), F(0))
            c_val = sum((coef * r ** m for m, coef in c_list[n].items()), F(0))
            assert dev_coefficient(state, n, (r, F(0))) == (a_val, 0, c_val)


def test_radial_ball_route_contains_exact():
    exact_a, exact_c = radial_levels(8)
    ball_a, ball_c = radial_levels_ball(8, 128)
    for exact_list, ball_list in ((exact_a, ball_a), (exact_c, ball_c)):
        for n in range(9):
            assert exact_list[n].keys() == ball_list[n].keys()
            for m, q in exact_list[n].items():
                b = ball_list[n][m]
                assert isinstance(b, RealBall)
                assert b.contains(q)


def test_level_norms_fixture(state):
    norms = level_norms(state, 2)
    assert norms.l1 == F(1, 2)
    assert norms.l2sq == F(1, 8)
    assert norms.l2sq <= norms.l1 ** 2


def test_radius_estimate_geometric_oracle():
    # a_{2k} = 3^{-k} gives lhat_k = sqrt(3) for every k
    coeffs = []
    for k in range(7):
        coeffs.extend([F(1, 3 ** k), F(0)])
    ests = radius_estimate(coeffs)
    assert len(ests) > 0
    for est in ests:
        assert est == pytest.approx(3 ** 0.5, rel=1e-12)


def test_radius_estimate_error_paths():
    with pytest.raises(ValueError):
        radius_estimate([F(1), F(0), F(0), F(0), F(1)])  # vanishing even term
    with pytest.raises(ValueError):
        radius_estimate([F(1), F(0), F(-1), F(0), F(1)])  # sign flip
    assert radius_estimate([F(1), F(0), F(2)]) == []  # too short


def test_radius_estimates_drift_toward_bracket(state):
    a_vals = a_coefficients(state, 24)
    ests = radius_estimate(a_vals)
    assert 2.5 < ests[-1] < 3.0
