from fractions import Fraction

import pytest

from qtheta import (SeriesSpace, big_q_jacobi, jacobi_norm, partial_theta, poch_finite, poch_inf,
                    q_integral)
from qtheta.corpus.harness import compare
from qtheta.coeffring import Window
from qtheta.qseries import QMonomial, qs_invert

from brute import as_poly, one_minus, padd, pmul


def mono(s, name, q=0):
    return s.qmono(1, q, {name: 1})


def agree(f, g, order, degree):
    k = len(f.ring.params)
    return compare(f, g, order, Window((degree,) * k, (-degree,) * k)) is None


def test_partial_theta_terms():
    s = SeriesSpace.make(("a",), 3, order=10)
    assert partial_theta(s, mono(s, "a"))[0].terms == {(0,): 1, (1,): -1}
    got = as_poly(partial_theta(s, mono(s, "a")))
    assert got == {(0, 0): 1, (0, 1): -1, (1, 2): 1, (3, 3): -1}
    assert partial_theta(s, s.qmono(0, 0)) == s.one()


def test_partial_theta_product_identity():
    # (a)_oo (b)_oo sum (ab/q)_n q^n / (q, a, b)_n = ptheta(a) ptheta(b)
    s = SeriesSpace.make(("a", "b"), 8, order=12)
    a, b = mono(s, "a"), mono(s, "b")
    lhs = partial_theta(s, a) * partial_theta(s, b)
    rhs = s.zero()
    one = s.qmono(1, 1)
    for n in range(12):
        t = poch_finite(s, (a * b).shift_q(n - 1), 1, n) * s.q(n)
        for x in (one, a, b):
            t = t / poch_finite(s, x, 1, n)
        rhs = rhs + t
    rhs = rhs.truncate(12) * poch_inf(s, one) * poch_inf(s, a) * poch_inf(s, b)
    assert agree(lhs, rhs, 12, 6)


def test_heine_special_case():
    # sum c^n q^{n^2} / (q, c)_n * (c)_oo = ptheta(c)
    s = SeriesSpace.make(("c",), 8, order=14)
    c = mono(s, "c")
    total = s.zero()
    for n in range(5):
        t = s.monomial(c.power(n).shift_q(n * n))
        t = t / (poch_finite(s, s.qmono(1, 1), 1, n) * poch_finite(s, c, 1, n))
        total = total + t
    total = total.truncate(14) * poch_inf(s, c)
    assert agree(total, partial_theta(s, c), 14, 8)


@pytest.fixture(scope="module")
def jspace():
    return SeriesSpace.make(("x", "a", "b", "c"), 4, order=8)


def test_big_q_jacobi_degree_zero(jspace):
    s = jspace
    assert big_q_jacobi(s, 0, *(mono(s, n) for n in "xabc")) == s.one()


def test_big_q_jacobi_degree_one(jspace):
    s = jspace
    x, a, b, c = (mono(s, n) for n in "xabc")
    got = big_q_jacobi(s, 1, x, a, b, c)
    num = (s.one() - s.monomial((a * b).shift_q(2))) * (s.one() - s.param("x"))
    den = (s.one() - s.monomial(a.shift_q(1))) * (s.one() - s.monomial(c.shift_q(1)))
    assert agree(got, s.one() - num * qs_invert(den), 8, 4)


@pytest.mark.parametrize("n", range(6))
def test_big_q_jacobi_x_degree(n):
    s = SeriesSpace.make(("x", "a", "b", "c"), 6, order=3)
    p = big_q_jacobi(s, n, *(mono(s, v) for v in "xabc"))
    degs = {raw[0] for k, c in p.coeffs.items() for raw, _ in c.items_raw()}
    assert max(degs) == n


def test_big_q_jacobi_brute_force():
    # n = 2 with the numeric choice a = 1/2, b = 1/3, c = 1/5, as a polynomial in x, q
    s = SeriesSpace.make(("x",), 4, order=8)
    a, b, c = (QMonomial(Fraction(1, d), 0, (0,)) for d in (2, 3, 5))
    got = big_q_jacobi(s, 2, mono(s, "x"), a, b, c)
    # the terminating sum written out by hand with exact fractions
    want = {}
    for k in range(3):
        num = {(0, 0): Fraction(1)}
        for j in range(k):
            num = pmul(num, one_minus(j - 2, (0,)))
            num = pmul(num, one_minus(3 + j, (0,), Fraction(1, 6)))
            num = pmul(num, one_minus(j, (1,)))
        # denominators are numeric in q only; expand 1/(1 - u q^m) to q^12
        for j in range(k):
            for u, m in ((1, j + 1), (Fraction(1, 2), j + 1), (Fraction(1, 5), j + 1)):
                geo = {(m * i, 0): Fraction(u) ** i for i in range(0, 14 // m + 1)}
                num = pmul(num, geo, 14)
        num = {(qe + k, xe): v for (qe, xe), v in num.items()}
        want = padd(want, num)
    want = {key: v for key, v in want.items() if key[0] < 8}
    assert as_poly(got) == want


def test_jacobi_norm_degree_zero():
    s = SeriesSpace.make(("a", "b", "c"), 10, order=8)
    a, b, c = (mono(s, n) for n in "abc")
    one = s.qmono(1, 0)
    out = s.monomial(a.shift_q(1)) * (s.one() - s.q())
    for y in (one.shift_q(1), c * a.inverse(), (a * c.inverse()).shift_q(1), (a * b).shift_q(2)):
        out = out * poch_inf(s, y)
    for y in (a.shift_q(1), b.shift_q(1), c.shift_q(1), (a * b * c.inverse()).shift_q(1)):
        out = out * qs_invert(poch_inf(s, y))
    assert agree(jacobi_norm(s, 0, a, b, c), out, 8, 3)


def _weight_integral(s, m, n):
    a, b, c = (mono(s, v) for v in "abc")

    def integrand(x):
        w = poch_inf(s, x * a.inverse()) * poch_inf(s, x * c.inverse())
        w = w * qs_invert(poch_inf(s, x)) * qs_invert(poch_inf(s, x * b * c.inverse()))
        for k in (m, n):
            w = w * big_q_jacobi(s, k, x, a, b, c)
        return w

    return q_integral(s, integrand, c.shift_q(1), a.shift_q(1))


@pytest.mark.parametrize("m,n", [(0, 0), (0, 1)])
def test_orthogonality_low_degree(m, n):
    s = SeriesSpace.make(("a", "b", "c"), 6, order=8, inverted=())
    a, b, c = (mono(s, v) for v in "abc")
    lhs = _weight_integral(s, m, n)
    rhs = jacobi_norm(s, n, a, b, c) if m == n else s.zero()
    assert agree(lhs, rhs, 6, 2)
