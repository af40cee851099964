"""Naive reference arithmetic used as an oracle in the tests.

Polynomials are plain dicts ``{(qexp, e1, e2, ...): Fraction}``; nothing here
touches the package.
"""

from collections import defaultdict
from fractions import Fraction


def pmul(f, g, qmax=None):
    out = defaultdict(Fraction)
    for k1, v1 in f.items():
        for k2, v2 in g.items():
            k = tuple(a + b for a, b in zip(k1, k2))
            if qmax is None or k[0] < qmax:
                out[k] += v1 * v2
    return {k: v for k, v in out.items() if v}


def padd(f, g, scale=1):
    out = defaultdict(Fraction, f)
    for k, v in g.items():
        out[k] += scale * v
    return {k: v for k, v in out.items() if v}


def one_minus(qexp, exps, coeff=1):
    zero = (0,) * (len(exps) + 1)
    return padd({zero: Fraction(1)}, {(qexp,) + tuple(exps): Fraction(coeff)}, -1)


def euler_product(n):
    """Coefficients of prod_{j>=1} (1 - q^j) below q^n, as an int list."""
    c = [0] * n
    c[0] = 1
    for j in range(1, n):
        for k in range(n - 1, j - 1, -1):
            c[k] -= c[k - j]
    return c


def pentagonal(n):
    """Euler's pentagonal number series below q^n."""
    c = [0] * n
    k = 0
    while True:
        hit = False
        for m in ((k * (3 * k - 1)) // 2, (k * (3 * k + 1)) // 2):
            if m < n:
                c[m] = (-1) ** k
                hit = True
        if not hit:
            return c
        k += 1


def as_poly(series):
    """QSeries -> dict in raw exponents (ignores precision)."""
    out = {}
    for k, c in series.coeffs.items():
        for raw, v in c.items_raw():
            out[(k,) + tuple(raw)] = Fraction(v)
    return out


def q_list(series, n):
    """Coefficients of a q-only series below q^n."""
    out = [0] * n
    for k, c in series.coeffs.items():
        if 0 <= k < n:
            out[k] = c.constant_term()
    return out
