"""Randomised kernel properties (each runs at least 200 examples)."""

from collections import Counter
from fractions import Fraction

from hypothesis import assume, given, settings, strategies as st

from qtheta import QMonomial, SeriesSpace, poch_finite, q_integral, qs_invert
from qtheta.coeffring import INF
from qtheta.qseries import qs_subst_param

from brute import as_poly, one_minus, pmul

N = 200
# examples actually exercised per property (read by the acceptance suite)
RUNS = Counter()
ORDER = 8
SPACE = SeriesSpace.make(("a", "b"), 12, order=ORDER)
XSPACE = SeriesSpace.make(("x", "a"), 16, order=ORDER)

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(bool)


def coeff_terms(lo=-2, hi=2, size=3):
    key = st.tuples(st.integers(lo, hi), st.integers(lo, hi))
    return st.dictionaries(key, rationals, min_size=1, max_size=size)


@st.composite
def series(draw, space=SPACE, lo=-2, hi=2, exact=False):
    levels = draw(st.dictionaries(st.integers(-1, 4), coeff_terms(lo, hi), max_size=3))
    order = INF if exact else draw(st.sampled_from([INF, 4, 6, ORDER]))
    return space.from_levels(levels, order)


def eq_mod(f, g):
    """Equality up to the common precision of both sides."""
    n = min(f.order, g.order, f.space.order)
    return f.truncate(n) == g.truncate(n)


def unclipped(*fs):
    return not any(f.clipped for f in fs)


@settings(max_examples=N, deadline=None)
@given(series(), series(), series())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    fg_h, f_gh = (f * g) * h, f * (g * h)
    assume(unclipped(fg_h, f_gh))
    assert eq_mod(fg_h, f_gh)
    assert eq_mod(f * (g + h), f * g + f * h)
    assert f * SPACE.one() == f.capped()
    assert eq_mod(f - f, SPACE.zero())
    RUNS["ring_axioms"] += 1


@st.composite
def invertible(draw):
    c0 = draw(rationals)
    rest = draw(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), rationals,
                                max_size=2))
    rest.pop((0, 0), None)
    lead = {(0, 0): c0, **rest}
    higher = draw(st.dictionaries(st.integers(1, 4), coeff_terms(), max_size=3))
    shift = draw(st.integers(-2, 2))
    levels = {k + shift: v for k, v in {0: lead, **higher}.items()}
    return SPACE.from_levels(levels, draw(st.sampled_from([INF, ORDER + shift])))


@settings(max_examples=N, deadline=None)
@given(invertible())
def test_invert_round_trip(f):
    g = qs_invert(f)
    p = f * g
    assert p.order >= ORDER - 2  # shifts reach down to q^-2
    assert eq_mod(p, SPACE.one())
    # the inverse of the inverse gives f back on its known part
    if not g.clipped:
        assert eq_mod(qs_invert(g), f)
    RUNS["invert_round_trip"] += 1


monomials = st.builds(
    lambda c, q, a, b: QMonomial(c, q, (a, b)),
    rationals, st.integers(-2, 3), st.integers(0, 2), st.integers(0, 2))


@settings(max_examples=N, deadline=None)
@given(monomials, st.integers(1, 3), st.integers(0, 5))
def test_pochhammer_against_direct_product(x, m, n):
    got = poch_finite(SPACE, x, m, n)
    want = {(0, 0, 0): Fraction(1)}
    for j in range(n):
        want = pmul(want, one_minus(x.qexp + m * j, x.exps, x.coefficient))
    assert as_poly(got) == {k: v for k, v in want.items() if k[0] < ORDER}
    step = got * poch_finite(SPACE, x.shift_q(m * n), m, 1)
    assert eq_mod(step, poch_finite(SPACE, x, m, n + 1))
    RUNS["pochhammer_against_direct_product"] += 1


@settings(max_examples=N, deadline=None)
@given(series(XSPACE, 0, 2, exact=True), series(XSPACE, 0, 2, exact=True),
       st.integers(1, 2), st.integers(0, 2), rationals)
def test_substitution_is_a_homomorphism(f, g, qe, ae, c):
    m = QMonomial(c, qe, (0, ae))
    s = lambda h: qs_subst_param(h, "x", m)
    assert eq_mod(s(f + g), s(f) + s(g))
    assert eq_mod(s(f * g), s(f) * s(g))
    assert eq_mod(s(XSPACE.one()), XSPACE.one())
    RUNS["substitution_is_a_homomorphism"] += 1


polys = st.dictionaries(st.integers(0, 3), rationals, max_size=3)
ends = st.sampled_from([(0, 0), (0, 1), (1, 0)])


def integrand(poly):
    def f(x):
        out = SPACE.zero()
        for i, c in poly.items():
            out = out + SPACE.monomial(x.power(i)).scale(c)
        return out
    return f


@settings(max_examples=N, deadline=None)
@given(polys, polys, rationals, rationals, ends, ends)
def test_q_integral_is_linear(p1, p2, alpha, beta, lo, hi):
    lower = QMonomial(1, 0, lo) if lo != (0, 0) else QMonomial(0, 0, (0, 0))
    upper = QMonomial(1, 0, hi)
    combo = {i: alpha * p1.get(i, 0) + beta * p2.get(i, 0) for i in set(p1) | set(p2)}
    lhs = q_integral(SPACE, integrand(combo), lower, upper)
    rhs = (q_integral(SPACE, integrand(p1), lower, upper).scale(alpha)
           + q_integral(SPACE, integrand(p2), lower, upper).scale(beta))
    assert eq_mod(lhs, rhs)
    RUNS["q_integral_is_linear"] += 1
