"""Named special functions built on the series kernel."""

from __future__ import annotations

from .qseries import QMonomial, QSeries, SeriesSpace
from .summation import Index, SumSpec, TerminationBound, eval_sum, phi


def _one(space):
    return QMonomial(1, 0, space.ring.zero_exps)


def partial_theta(space: SeriesSpace, x: QMonomial) -> QSeries:
    """``sum_{n>=0} (-1)^n x^n q^{n(n-1)/2}``."""
    if x.is_zero:
        return space.one()
    qx = x.qexp

    def f(k):
        return k * (k - 1) // 2 + k * qx

    def bound(env):
        n = env["n"]
        # f is convex; its minimum over k >= n sits within |qx| + 1 steps
        return min(f(k) for k in range(n, n + abs(qx) + 2))

    cache = {}

    def body(env):
        n = env["n"]
        if n == 0:
            t = space.one()
        else:
            # t_n = t_{n-1} * (-x q^{n-1})
            t = cache.pop(n - 1).mul_monomial(QMonomial(-x.coefficient, x.qexp + n - 1, x.exps))
        cache[n] = t
        return t

    spec = SumSpec([Index("n", lambda e: 0)], TerminationBound({"q": 1}, bound), body,
                   label="partial theta")
    return eval_sum(space, spec)


def big_q_jacobi(space: SeriesSpace, n: int, x: QMonomial, a: QMonomial, b: QMonomial,
                 c: QMonomial) -> QSeries:
    """Big q-Jacobi polynomial as the terminating 3phi2
    ``(q^-n, a b q^(n+1), x; a q, c q; q, q)``."""
    one = _one(space)
    upper = [one.shift_q(-n), (a * b).shift_q(n + 1), x]
    lower = [a.shift_q(1), c.shift_q(1)]
    # the k-th term starts at q^(k(k+1)/2 - nk); those negative powers cancel
    # across the sum, so work that much deeper and cut back afterwards
    depth = max(n * k - k * (k + 1) // 2 for k in range(n + 1))
    depth += n * max(0, -min(y.qexp for y in upper[1:] + lower))
    if not depth:
        return phi(space, upper, lower, 1, one.shift_q(1))
    deep = SeriesSpace(space.ring, space.order + depth)
    r = phi(deep, upper, lower, 1, one.shift_q(1))
    # P_n is a power series in q, so a negative level can only hold the
    # placeholders of terms clipped at the window that cancel in truth; they
    # are dropped so they do not drag down the order of later products
    coeffs = {k: v for k, v in r.coeffs.items()
              if k < space.order and (k >= 0 or v.terms)}
    return QSeries(space, coeffs, min(r.order, space.order)).capped()


def jacobi_norm(space: SeriesSpace, n: int, a: QMonomial, b: QMonomial,
                c: QMonomial) -> QSeries:
    """The squared norm of the degree-``n`` big q-Jacobi polynomial under the
    weight ``(x/a, x/c; q)_oo / (x, b x/c; q)_oo`` on ``[cq, aq]``."""
    one = _one(space)
    ab = a * b
    c_inv = c.inverse()
    a_inv = a.inverse()
    # prefactor a q (1-q) (q, c/a, a q/c, a b q^2)_oo / (a q, b q, c q, a b q/c)_oo
    num_inf = [one.shift_q(1), c * a_inv, (a * c_inv).shift_q(1), ab.shift_q(2)]
    den_inf = [a.shift_q(1), b.shift_q(1), c.shift_q(1), (ab * c_inv).shift_q(1)]
    num_fin = [one.shift_q(1), b.shift_q(1), (ab * c_inv).shift_q(1)]
    den_fin = [ab.shift_q(1), a.shift_q(1), c.shift_q(1)]
    sign = -1 if n % 2 else 1
    ac = a * c
    mono = QMonomial(sign * ac.coefficient ** n, 2 * n + n * (n - 1) // 2,
                     tuple(e * n for e in ac.exps))
    out = space.monomial(mono).mul_monomial(a.shift_q(1))
    out = out.mul_one_minus(one.shift_q(1))
    out = out.mul_one_minus(ab.shift_q(1))
    out = out.div_one_minus(ab.shift_q(2 * n + 1))
    for y in num_fin:
        for j in range(n):
            out = out.mul_one_minus(y.shift_q(j))
    for y in den_fin:
        for j in range(n):
            out = out.div_one_minus(y.shift_q(j))
    out = apply_poch_inf(out, num_inf, divide=False)
    out = apply_poch_inf(out, den_inf, divide=True)
    return out


def apply_poch_inf(f: QSeries, xs, divide: bool, m: int = 1) -> QSeries:
    """Multiply (or divide) ``f`` by ``prod_x (x; q^m)_oo``.

    Factors whose q-degree puts them beyond the reach of the working order
    are skipped and the claimed order is lowered accordingly.
    """
    space = f.space
    for x in xs:
        if x.is_zero:
            continue
        v = f.val_bound
        limit = space.order + max(0, -v) if v != float("inf") else space.order
        j = 0
        while x.qexp + m * j < limit:
            y = x.shift_q(m * j)
            f = f.div_one_minus(y) if divide else f.mul_one_minus(y)
            j += 1
        first_skipped = x.qexp + m * j
        if first_skipped <= 0:
            # cannot happen for m >= 1 once limit >= 1
            raise AssertionError("unreachable")
        vb = f.val_bound
        if vb != float("inf"):
            f = f.truncate(vb + first_skipped)
    return f.capped()
