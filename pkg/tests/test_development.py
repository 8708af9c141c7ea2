"""Development layer: the matrix word map, folding, and partial sums."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from disksig.balls import RealBall
from disksig.development import (Vec3Poly, fold_apply, fold_apply_naive,
                                 identity3, m_of_vector, m_word, mat_mul,
                                 mat_vec, partial_sum_F)
from disksig.exactpoly import Poly2, TensorPoly, words

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=12)
E3 = (F(0), F(0), F(1))


def test_m_of_basis_vectors():
    m1 = m_of_vector((F(1), F(0)))
    m2 = m_of_vector((F(0), F(1)))
    assert m1 == ((0, 0, 1), (0, 0, 0), (1, 0, 0))
    assert m2 == ((0, 0, 0), (0, 0, 1), (0, 1, 0))


def test_m_word_fixtures():
    assert m_word("12") == ((0, 1, 0), (0, 0, 0), (0, 0, 0))
    assert m_word("11") == ((1, 0, 0), (0, 0, 0), (0, 0, 1))
    assert m_word("") == identity3()


@given(st.text(alphabet="12", max_size=6), st.text(alphabet="12", max_size=6))
@settings(max_examples=100, deadline=None)
def test_m_word_is_multiplicative(u, v):
    assert m_word(u + v) == mat_mul(m_word(u), m_word(v))


@given(rationals, rationals)
@settings(max_examples=100, deadline=None)
def test_quarter_turn_equivariance(x, y):
    """Rotating the vector conjugates M by the block rotation R + 1."""
    rot = ((F(0), F(-1), F(0)), (F(1), F(0), F(0)), (F(0), F(0), F(1)))
    rot_t = ((F(0), F(1), F(0)), (F(-1), F(0), F(0)), (F(0), F(0), F(1)))
    lhs = m_of_vector((-y, x))
    rhs = mat_mul(rot, mat_mul(m_of_vector((x, y)), rot_t))
    assert lhs == rhs


def random_tensor(rng, level):
    t = TensorPoly.zeros(level)
    for idx in range(2 ** level):
        if rng.random() < 0.5:
            i, j = rng.randrange(3), rng.randrange(3)
            t.entries[idx] = Poly2.monomial(i, j, F(rng.randrange(-9, 10), 4))
    return t


@given(st.integers(0, 6), st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_fold_matches_brute_force(level, rng):
    t = random_tensor(rng, level)
    assert fold_apply(t, E3) == fold_apply_naive(t, E3)


def test_fold_of_level2_solution(state):
    """Folding pi_2 against e3 gives (0, 0, (1 - x^2 - y^2)/2)."""
    v = fold_apply(state.tensor(2), E3)
    x2 = Poly2.monomial(2, 0)
    y2 = Poly2.monomial(0, 2)
    assert v.c1.is_zero()
    assert v.c2.is_zero()
    assert v.c3 == (Poly2.const(1) - x2 - y2) * F(1, 2)


def test_fold_against_explicit_sum(state):
    """fold(pi_n) = sum_w pi_n[w] M(w) e3, spelled out longhand."""
    t = state.tensor(3)
    acc = Vec3Poly.zero()
    for w in words(3):
        column = mat_vec(m_word(w), E3)
        acc = acc + Vec3Poly(*(t.entry(w) * c for c in column))
    assert fold_apply(t, E3) == acc


def test_partial_sum_trivial_cases(state):
    levels = [state.developed(n) for n in range(3)]
    assert partial_sum_F(F(7, 3), (F(1, 5), F(-1, 7)), 0, levels) == (0, 0, 1)
    # on the circle every V_n with n >= 1 vanishes, so any partial sum is e3
    assert partial_sum_F(F(2), (F(3, 5), F(4, 5)), 2, levels) == (0, 0, 1)
    # N = 2 at the origin picks up a_2 = 1/2
    assert partial_sum_F(1, (0, 0), 2, levels) == (0, 0, F(3, 2))


def test_partial_sum_axis_symmetry(state):
    levels = [state.developed(n) for n in range(9)]
    for xq in (F(0), F(1, 3), F(-2, 5)):
        val = partial_sum_F(F(1, 2), (xq, F(0)), 8, levels)
        assert val[1] == 0


def test_partial_sum_ball_route_contains_exact(state):
    levels = [state.developed(n) for n in range(13)]
    lam = F(3, 2)
    z = (F(1, 4), F(1, 8))
    exact = partial_sum_F(lam, z, 12, levels)
    lam_ball = RealBall.from_rational(lam, 128)
    balls = partial_sum_F(lam_ball, z, 12, levels, prec=128)
    for k in range(3):
        assert balls[k].contains(exact[k])
        assert balls[k].rad_fraction() < F(1, 10 ** 20)


def test_partial_sum_needs_enough_levels(state):
    levels = [state.developed(n) for n in range(3)]
    with pytest.raises(ValueError):
        partial_sum_F(1, (0, 0), 5, levels)
