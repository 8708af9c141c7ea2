"""Rigorous Bessel J0/J1 enclosures and the closed form they assemble into.

The generating function F(lambda, z) of the developed hierarchy solves, in
radial coordinates, a Bessel-type system whose solution is expressed
through the two constants

    zeta  = sqrt((-1 + i sqrt 7) / 2)    (principal branch)
    alpha = zeta^3 / 2 + zeta

and the denominator d(lambda) = Im(conj(alpha) J0(lambda zeta)
J1(lambda conj(zeta))).  Everything is evaluated in ball arithmetic: the
J series are truncated power series with an explicit geometric tail
bound folded into the radius, so every returned ball contains the true
value.  Zeros of d are poles of the closed form; abc_closed_form refuses
to divide by a d-ball that straddles zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .balls import DEFAULT_PREC, ComplexBall, RealBall
from .exactpoly import as_rat

_HALF = Fraction(1, 2)


def _as_real_ball(x, prec: int) -> RealBall:
    if isinstance(x, RealBall):
        return x
    return RealBall.from_rational(as_rat(x), prec)


def _as_complex_ball(x, prec: int) -> ComplexBall:
    if isinstance(x, ComplexBall):
        return x
    return ComplexBall.from_real(_as_real_ball(x, prec))


def bessel_tail_bound(x, n: int) -> RealBall:
    """Upper bound for the series tail of J0 or J1 truncated before term n.

    Both tails are dominated by the geometric bound
        (1 - |x|^2/(2n+2)^2)^(-1) * |x/2|^(2n) / n!^2,
    computed here in exact rationals from an upper bound of |x|.
    Requires |x| < 2(n+1).
    """
    if n < 0:
        raise ValueError("negative term index")
    if isinstance(x, ComplexBall):
        xu = x.abs2().upper()  # |x|^2 upper bound, exact rational
    elif isinstance(x, RealBall):
        xu = x.abs().upper() ** 2
    else:
        xu = as_rat(x) ** 2
    cap = Fraction(4 * (n + 1) * (n + 1))
    if xu >= cap:
        raise ValueError(f"|x| >= 2(n+1) = {2 * (n + 1)}; tail bound invalid")
    first = (xu / 4) ** n / Fraction(factorial(n)) ** 2
    geom = 1 / (1 - xu / cap)
    return RealBall.from_rational(first * geom)


def _auto_terms(x: ComplexBall, prec: int) -> int:
    """Smallest n with tail bound below 2^(10 - prec)."""
    target = Fraction(1, 2 ** (prec - 10))
    xu2 = x.abs2().upper()
    n = 1
    while 4 * (n + 1) ** 2 <= xu2:
        n += 1
    while True:
        cap = Fraction(4 * (n + 1) * (n + 1))
        bound = (xu2 / 4) ** n / Fraction(factorial(n)) ** 2 / (1 - xu2 / cap)
        if bound < target:
            return n
        n += 1


def bessel_j(nu: int, x, n_terms: int | None = None,
             prec: int = DEFAULT_PREC) -> ComplexBall:
    """Enclosure of J_nu(x), nu in {0, 1}, for a complex ball argument.

    Partial sum of the ascending series in ball arithmetic, radius
    inflated by bessel_tail_bound; the result contains the true value.
    """
    if nu not in (0, 1):
        raise ValueError("only orders 0 and 1 are implemented")
    x = _as_complex_ball(x, prec)
    if n_terms is None:
        n_terms = _auto_terms(x, prec)
    if n_terms < 1:
        raise ValueError("need at least one term")
    half = x.mul_real(RealBall.from_rational(_HALF, prec), prec)
    q = half.mul(half, prec)
    if nu == 0:
        term = ComplexBall.from_real(RealBall.from_int(1))
    else:
        term = half
    acc = term
    for k in range(n_terms - 1):
        den = (k + 1) * (k + 1) if nu == 0 else (k + 1) * (k + 2)
        factor = RealBall.from_rational(Fraction(-1, den), prec)
        term = term.mul(q, prec).mul_real(factor, prec)
        acc = acc.add(term, prec)
    tail = bessel_tail_bound(x, n_terms).upper()
    return ComplexBall(acc.re.inflate(tail), acc.im.inflate(tail))


@dataclass(frozen=True)
class Constants:
    """Certified enclosures of zeta and alpha at a stated precision."""

    zeta: ComplexBall
    alpha: ComplexBall
    prec: int


def make_constants(prec: int = DEFAULT_PREC) -> Constants:
    """Enclosures of zeta (principal branch) and alpha = zeta^3/2 + zeta.

    zeta^2 = (-1 + i sqrt 7)/2 sits in the upper half plane, so the
    principal square root is well defined and the complex-ball sqrt
    applies without meeting the branch cut.
    """
    if prec < 53:
        raise ValueError("precision below 53 bits is not supported")
    sqrt7 = RealBall.from_int(7).sqrt(prec)
    zeta_sq = ComplexBall(RealBall.from_rational(Fraction(-1, 2), prec),
                          sqrt7.mul_2exp(-1))
    zeta = zeta_sq.sqrt(prec)
    z3 = zeta.mul(zeta, prec).mul(zeta, prec)
    alpha = z3.mul_2exp(-1).add(zeta, prec)
    return Constants(zeta=zeta, alpha=alpha, prec=prec)


def series_terms(lam, constants: Constants, prec: int | None = None) -> int:
    """Truncation length auto-selected for J at argument lambda*zeta."""
    prec = prec or constants.prec
    x = _as_complex_ball(lam, prec).mul(constants.zeta, prec)
    return _auto_terms(x, prec)


def remark_product(lam, constants: Constants,
                   prec: int | None = None) -> ComplexBall:
    """Enclosure of conj(alpha) J0(lambda zeta) J1(lambda conj(zeta))."""
    prec = prec or constants.prec
    lamc = _as_complex_ball(lam, prec)
    x0 = lamc.mul(constants.zeta, prec)
    x1 = lamc.mul(constants.zeta.conj(), prec)
    j0 = bessel_j(0, x0, prec=prec)
    j1 = bessel_j(1, x1, prec=prec)
    return constants.alpha.conj().mul(j0, prec).mul(j1, prec)


def d_lambda(lam, constants: Constants, prec: int | None = None) -> RealBall:
    """d(lambda) = Im of the remark product; zeros of d are the poles."""
    return remark_product(lam, constants, prec).im


def d_lambda_determinant(lam, constants: Constants,
                         prec: int | None = None) -> RealBall:
    """d(lambda) by the Wronskian-style route, an independent evaluation.

    2i d = conj(alpha) J0(lz) J1(lz~) - alpha J1(lz) J0(lz~), with both
    factors on the second term evaluated from their own series rather
    than by conjugating the first.  Must intersect d_lambda's output.
    """
    prec = prec or constants.prec
    lamc = _as_complex_ball(lam, prec)
    x0 = lamc.mul(constants.zeta, prec)
    x1 = lamc.mul(constants.zeta.conj(), prec)
    w1 = constants.alpha.conj().mul(bessel_j(0, x0, prec=prec), prec)
    w1 = w1.mul(bessel_j(1, x1, prec=prec), prec)
    w2 = constants.alpha.mul(bessel_j(1, x0, prec=prec), prec)
    w2 = w2.mul(bessel_j(0, x1, prec=prec), prec)
    diff = w1.sub(w2, prec)
    # (a + bi)/(2i) has real part b/2; for real lambda, a's ball straddles 0
    return diff.im.mul_2exp(-1)


def numerator_im(lam, constants: Constants,
                 prec: int | None = None) -> RealBall:
    """Im(conj(alpha) J1(lambda conj(zeta))), the C-numerator at r = 0.

    Accepts an interval-shaped lambda ball, so a single call can enclose
    the numerator over a whole bracket.
    """
    prec = prec or constants.prec
    lamc = _as_complex_ball(lam, prec)
    x1 = lamc.mul(constants.zeta.conj(), prec)
    j1 = bessel_j(1, x1, prec=prec)
    return constants.alpha.conj().mul(j1, prec).im


def abc_closed_form(lam, r, constants: Constants,
                    prec: int | None = None) -> tuple:
    """The closed-form radial triple (A, B, C) at lambda, r in [0, 1].

        A = (|alpha|^2 / d) Im(J1(l zeta~) J1(l zeta r))
        B = 0
        C = (1 / d)         Im(conj(alpha) J1(l zeta~) J0(l zeta r))

    The A-prefactor is |alpha|^2 = sqrt(2), pinned two independent ways:
    matching the lambda^3 coefficient of the exact hierarchy gives
    exactly sqrt(2), and |alpha| = |zeta| |zeta^2 + 2|/2 = |zeta| with
    |zeta|^2 = |zeta^2| = sqrt(2).  Raises on pole proximity: the
    d(lambda) ball must exclude zero.
    """
    prec = prec or constants.prec
    r_ball = _as_real_ball(r, prec)
    if r_ball.lower() < 0 or r_ball.upper() > 1:
        raise ValueError("r must lie in [0, 1]")
    lamc = _as_complex_ball(lam, prec)
    d = d_lambda(lam, constants, prec)
    if d.contains_zero():
        raise ValueError("pole proximity: d(lambda) enclosure contains zero; "
                         "raise precision or move lambda away from the pole")
    x1 = lamc.mul(constants.zeta.conj(), prec)
    xr = lamc.mul(constants.zeta, prec).mul_real(r_ball, prec)
    j1_fix = bessel_j(1, x1, prec=prec)
    alpha_sq = constants.alpha.abs2(prec)
    a_num = j1_fix.mul(bessel_j(1, xr, prec=prec), prec).im
    a_val = a_num.mul(alpha_sq, prec).div(d, prec)
    c_num = constants.alpha.conj().mul(j1_fix, prec)
    c_num = c_num.mul(bessel_j(0, xr, prec=prec), prec).im
    c_val = c_num.div(d, prec)
    return a_val, RealBall.zero(), c_val


def ode_residual(lam, r, h, constants: Constants,
                 prec: int | None = None) -> tuple:
    """Magnitudes of central-difference residuals of the radial system.

    The closed-form triple must satisfy
        r^2 A'' + r A' - A + l^2 r^2 A + 2 l r^2 C' = 0
        B = 0
        r C'' + C' + 2 l^2 r C + 2 l r A' + 2 l A = 0
    Derivatives are replaced by second-order central differences with
    rational step h, so the returned balls enclose the discrete residual
    (O(h^2) away from zero) rigorously.  Requires r +/- 2h inside (0, 1)
    and lambda off the pole.
    """
    prec = prec or constants.prec
    r_q = as_rat(r)
    h_q = as_rat(h)
    if h_q <= 0:
        raise ValueError("step must be positive")
    if not (0 < r_q - 2 * h_q and r_q + 2 * h_q < 1):
        raise ValueError("need r +/- 2h inside (0, 1)")
    lam_b = _as_real_ball(lam, prec)
    a_m, _, c_m = abc_closed_form(lam, r_q - h_q, constants, prec)
    a_0, b_0, c_0 = abc_closed_form(lam, r_q, constants, prec)
    a_p, _, c_p = abc_closed_form(lam, r_q + h_q, constants, prec)

    def ball(q):
        return RealBall.from_rational(q, prec)

    inv_2h = ball(1 / (2 * h_q))
    inv_h2 = ball(1 / (h_q * h_q))
    a_d1 = a_p.sub(a_m, prec).mul(inv_2h, prec)
    a_d2 = a_p.sub(a_0.mul_2exp(1), prec).add(a_m, prec).mul(inv_h2, prec)
    c_d1 = c_p.sub(c_m, prec).mul(inv_2h, prec)
    c_d2 = c_p.sub(c_0.mul_2exp(1), prec).add(c_m, prec).mul(inv_h2, prec)
    r_b = ball(r_q)
    r2_b = ball(r_q * r_q)
    lam2 = lam_b.sqr(prec)
    res1 = (r2_b.mul(a_d2, prec)
            .add(r_b.mul(a_d1, prec), prec)
            .sub(a_0, prec)
            .add(lam2.mul(r2_b, prec).mul(a_0, prec), prec)
            .add(lam_b.mul(r2_b, prec).mul(c_d1, prec).mul_2exp(1), prec))
    res3 = (r_b.mul(c_d2, prec)
            .add(c_d1, prec)
            .add(lam2.mul(r_b, prec).mul(c_0, prec).mul_2exp(1), prec)
            .add(lam_b.mul(r_b, prec).mul(a_d1, prec).mul_2exp(1), prec)
            .add(lam_b.mul(a_0, prec).mul_2exp(1), prec))
    return res1.abs(), b_0.abs(), res3.abs()
