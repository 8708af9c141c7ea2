"""Exact polynomial layer: ring ops, traces, harmonic extension, words."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from disksig.exactpoly import (Poly2, TensorPoly, boundary_trace,
                               harmonic_extension, laplacian, words,
                               word_index)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)


def poly_strategy(max_terms=5, max_deg=4):
    term = st.tuples(st.integers(0, max_deg), st.integers(0, max_deg),
                     rationals)
    return st.lists(term, max_size=max_terms).map(
        lambda ts: sum((Poly2.monomial(i, j, v) for i, j, v in ts),
                       Poly2.zero()))


@given(poly_strategy(), poly_strategy(), rationals, rationals)
@settings(max_examples=100, deadline=None)
def test_ring_ops_agree_with_evaluation(p, q, x, y):
    assert (p + q).evaluate(x, y) == p.evaluate(x, y) + q.evaluate(x, y)
    assert (p * q).evaluate(x, y) == p.evaluate(x, y) * q.evaluate(x, y)
    assert (p - q).evaluate(x, y) == p.evaluate(x, y) - q.evaluate(x, y)


def test_partials_on_monomials():
    p = Poly2.monomial(3, 2)
    assert p.partial_x() == Poly2.monomial(2, 2, 3)
    assert p.partial_y() == Poly2.monomial(3, 1, 2)
    assert Poly2.const(5).partial_x().is_zero()


def test_laplacian_kills_harmonic_polynomials():
    x = Poly2.monomial(1, 0)
    y = Poly2.monomial(0, 1)
    for p in (x * x - y * y, x * y, x * x * x - 3 * x * y * y):
        assert laplacian(p).is_zero()
    assert laplacian(x * x) == Poly2.const(2)


def test_rotate90_is_algebra_map():
    x = Poly2.monomial(1, 0)
    y = Poly2.monomial(0, 1)
    p = x * x + 2 * x * y - y
    # (x, y) -> (-y, x)
    assert p.rotate90() == y * y - 2 * y * x - x
    assert (p * p).rotate90() == p.rotate90() * p.rotate90()


def test_restrict_y0_drops_y_terms():
    x = Poly2.monomial(1, 0)
    y = Poly2.monomial(0, 1)
    p = x * x + x * y + y * y
    assert p.restrict_y0() == x * x


def test_boundary_trace_of_radius_squared_is_one():
    x = Poly2.monomial(1, 0)
    y = Poly2.monomial(0, 1)
    t = boundary_trace(x * x + y * y)
    assert t == boundary_trace(Poly2.const(1))


@given(poly_strategy(max_terms=4, max_deg=3))
@settings(max_examples=100, deadline=None)
def test_harmonic_extension_matches_trace(p):
    """The extension of a trace is harmonic and agrees on the circle."""
    ext = harmonic_extension(boundary_trace(p))
    assert laplacian(ext).is_zero()
    assert boundary_trace(ext - p).is_zero()


def test_trig_product_identities():
    # cos^2 = (1 + cos 2t)/2 encoded exactly
    one = boundary_trace(Poly2.const(1))
    c = one.mul_cos()
    c2 = c.mul_cos()
    s2 = one.mul_sin().mul_sin()
    assert c2 + s2 == one


def test_trig_evaluate_matches_float():
    import math

    t = boundary_trace(Poly2.monomial(2, 1))  # x^2 y on the circle
    for theta in (0.3, 1.2, 4.0):
        want = math.cos(theta) ** 2 * math.sin(theta)
        assert t.evaluate(theta) == pytest.approx(want, abs=1e-12)


def test_words_enumeration_round_trips():
    for n in range(5):
        ws = words(n)
        assert len(ws) == 2 ** n
        assert ws == sorted(ws)
        for idx, w in enumerate(ws):
            assert word_index(w) == idx
    assert words(0) == [""]
    with pytest.raises(ValueError):
        word_index("13")


def test_tensor_poly_json_round_trip():
    x = Poly2.monomial(1, 0)
    t = TensorPoly.zeros(2)
    t.entries[word_index("12")] = x * x - F(1, 3)
    back = TensorPoly.from_json(t.to_json())
    assert back.level == 2
    assert back.entries == t.entries


def test_poly_json_round_trip():
    p = Poly2.monomial(2, 1, F(-7, 3)) + Poly2.const(F(1, 9))
    assert Poly2.from_json(p.to_json()) == p
