from fractions import Fraction

import pytest

from qtheta import (BoundViolation, ConfigurationError, Index, NonTermination, SeriesSpace,
                    SumSpec, TerminationBound, eval_bilateral, eval_sum, phi, poch_finite,
                    q_integral)
from qtheta.qseries import QMonomial, qs_invert

from brute import q_list


def qspace(order):
    return SeriesSpace.make((), 0, order=order)


def test_geometric_sum():
    s = qspace(4)
    spec = SumSpec([Index("n", lambda e: 0)], TerminationBound({"q": 1}, lambda e: e["n"]),
                   lambda e: s.q(e["n"]))
    assert eval_sum(s, spec) == sum((s.q(k) for k in range(4)), s.zero()).truncate(4)


def test_triangular_signs():
    s = qspace(10)
    tri = lambda n: n * (n + 1) // 2
    spec = SumSpec([Index("n", lambda e: 0)], TerminationBound({"q": 1}, lambda e: tri(e["n"])),
                   lambda e: s.q(tri(e["n"])).scale((-1) ** e["n"]))
    assert q_list(eval_sum(s, spec), 10) == [1, -1, 0, 1, 0, 0, -1, 0, 0, 0]


def test_sum_over_squared_pochhammer():
    # brute force with plain integers: 1/(q;q)_n^2 expanded by hand
    n_max = 5
    s = qspace(n_max)
    one = QMonomial(1, 1, ())

    def body(e):
        n = e["n"]
        d = poch_finite(s, one, 1, n)
        return s.q(n) * qs_invert(d * d)

    spec = SumSpec([Index("n", lambda e: 0)], TerminationBound({"q": 1}, lambda e: e["n"]), body)
    got = q_list(eval_sum(s, spec), n_max)

    def inv_poch_sq(n):
        c = [0] * n_max
        c[0] = 1
        for j in range(1, n + 1):
            for _ in range(2):
                for k in range(j, n_max):
                    c[k] += c[k - j]
        return c

    want = [0] * n_max
    for n in range(n_max):
        t = inv_poch_sq(n)
        for k in range(n_max - n):
            want[k + n] += t[k]
    assert got == want == [1, 1, 3, 6, 12]


def test_bilateral():
    s = qspace(11)
    f = lambda n: 2 * n * n + n
    bound = TerminationBound({"q": 1}, lambda e: f(e["n"]) if e["n"] >= 0 else f(e["n"] + 1) if e["n"] < -1 else 1)
    body = lambda e: s.q(f(e["n"])).scale(1 if e["n"] >= 0 else -1)
    got = q_list(eval_bilateral(s, "n", bound, body), 11)
    want = [0] * 11
    for n in range(-3, 3):
        if f(n) < 11:
            want[f(n)] += 1 if n >= 0 else -1
    assert got == want == [1, -1, 0, 1, 0, 0, -1, 0, 0, 0, 1]


def test_bound_violation_is_reported():
    s = qspace(6)
    spec = SumSpec([Index("n", lambda e: 0)], TerminationBound({"q": 1}, lambda e: e["n"]),
                   lambda e: s.q(e["n"] // 2))
    with pytest.raises(BoundViolation):
        eval_sum(s, spec)


def test_constant_bound_does_not_terminate():
    s = qspace(3)
    spec = SumSpec([Index("n", lambda e: 0)], TerminationBound({"q": 1}, lambda e: 0),
                   lambda e: s.zero())
    with pytest.raises(NonTermination):
        eval_sum(s, spec)


def test_unbounded_functional_rejected():
    s = qspace(3)
    spec = SumSpec([Index("n", lambda e: 0)], TerminationBound({"q": -1}, lambda e: 0),
                   lambda e: s.zero())
    with pytest.raises(ConfigurationError):
        eval_sum(s, spec)


def test_chu_vandermonde():
    s = SeriesSpace.make(("a", "c"), 6, order=12)
    a = s.qmono(1, 0, {"a": 1})
    c = s.qmono(1, 0, {"c": 1})
    one = s.qmono(1, 0)
    lhs = phi(s, [a, one.shift_q(-2)], [c], 1, one.shift_q(1))
    ca = c * a.inverse()
    rhs = poch_finite(s, ca, 1, 2) * s.monomial(a.power(2)) / poch_finite(s, c, 1, 2)
    d = lhs - rhs
    assert all(not v.terms for k, v in d.coeffs.items() if k < 12)


def test_phi_zero_argument():
    s = qspace(5)
    assert phi(s, [s.qmono(1, 1)], [], 1, s.qmono(0, 0)) == s.one()


def test_q_integral_examples():
    s = SeriesSpace.make(("a", "b"), 4, order=8)
    zero, one = s.qmono(0, 0), s.qmono(1, 0)
    assert q_integral(s, lambda x: s.one(), zero, one) == s.one().truncate(8)
    a, b = s.qmono(1, 0, {"a": 1}), s.qmono(1, 0, {"b": 1})
    assert q_integral(s, lambda x: s.one(), a, b) == (s.param("b") - s.param("a")).truncate(8)
    got = q_integral(s, lambda x: s.monomial(x), zero, one)
    assert q_list(got, 8) == [1, -1, 1, -1, 1, -1, 1, -1]
