"""Evaluate parsed identities to truncated q-series.

Symbolic mode keeps every declared parameter as a ring generator.  Point
mode substitutes exact rationals for a chosen subset of parameters (the
rest stay symbolic) by giving ``point`` a ``{name: Fraction}`` map.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

from ..coeffring import INF, LaurentCoeff, rdiv
from ..errors import (ConfigurationError, DomainError, EvaluationError, NotInvertible,
                      QThetaError)
from ..qseries import QMonomial, QSeries, SeriesSpace, qs_invert
from ..special import apply_poch_inf, big_q_jacobi, partial_theta
from ..summation import (Index, SumSpec, TerminationBound, eval_bilateral, eval_sum, phi,
                         q_integral)
from . import ast as A


def binom(n: int, k: int) -> int:
    """Generalised binomial ``n(n-1)...(n-k+1)/k!`` for any integer ``n``."""
    if k < 0:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= n - i
        den *= i + 1
    return num // den


def eval_int(e, env: Mapping) -> int:
    try:
        if isinstance(e, A.IntLit):
            return e.value
        if isinstance(e, A.IndexRef):
            try:
                return env[e.name]
            except KeyError:
                raise EvaluationError(f"index '{e.name}' has no value") from None
        if isinstance(e, A.IntNeg):
            return -eval_int(e.operand, env)
        if isinstance(e, A.IntBin):
            x, y = eval_int(e.left, env), eval_int(e.right, env)
            if e.op == "+":
                return x + y
            if e.op == "-":
                return x - y
            if e.op == "*":
                return x * y
            if y == 0 or x % y:
                raise EvaluationError(f"non-exact integer division {x}/{y}")
            return x // y
        if isinstance(e, A.Binom):
            return binom(eval_int(e.top, env), eval_int(e.k, env))
    except QThetaError as err:
        raise err.with_span(getattr(e, "span", None))
    raise TypeError(f"not an integer expression: {e!r}")


def graded_params(decl: A.IdentityDecl) -> set:
    """Parameters that carry weight in some termination bound.

    Point mode has to keep these symbolic: their sums only stop because the
    window in that parameter is finite.
    """
    out = set()
    for side in (decl.lhs, decl.rhs):
        for node in A.walk(side):
            b = getattr(node, "bound", None)
            if isinstance(b, A.Bound):
                out.update(n for n, w in b.weights if n != "q" and w)
    return out


class Evaluator:
    def __init__(self, space: SeriesSpace, point: Optional[Mapping[str, Fraction]] = None):
        self.space = space
        self.point = dict(point or {})
        self.nodes = 0

    # -- helpers -----------------------------------------------------------------
    def mono(self, e, env) -> Optional[QMonomial]:
        """Evaluate a monomial-shaped expression exactly (no order cap), else None."""
        sp = self.space
        if isinstance(e, A.RationalLit):
            return QMonomial(e.value, 0, sp.ring.zero_exps)
        if isinstance(e, A.ParamRef):
            if e.name in self.point:
                return QMonomial(self.point[e.name], 0, sp.ring.zero_exps)
            return sp.qmono(1, 0, {e.name: 1})
        if isinstance(e, A.IndexValue):
            return QMonomial(env[e.name], 0, sp.ring.zero_exps)
        if isinstance(e, A.VarRef):
            return env[e.name]
        if isinstance(e, A.QPower):
            return QMonomial(1, eval_int(e.exp, env), sp.ring.zero_exps)
        if isinstance(e, A.Neg):
            m = self.mono(e.operand, env)
            return None if m is None else QMonomial(-m.coefficient, m.qexp, m.exps)
        if isinstance(e, A.BinOp) and e.op in "*/":
            x = self.mono(e.left, env)
            if x is None:
                return None
            y = self.mono(e.right, env)
            if y is None:
                return None
            if e.op == "/":
                if y.is_zero:
                    raise NotInvertible("division by zero")
                y = y.inverse()
            return x * y
        if isinstance(e, A.Pow) and not isinstance(e.base, (A.PochFinite, A.PochInf)):
            m = self.mono(e.base, env)
            if m is None:
                return None
            k = eval_int(e.exp, env)
            if m.is_zero:
                if k < 0:
                    raise NotInvertible("zero to a negative power")
                return QMonomial(1 if k == 0 else 0, 0, sp.ring.zero_exps)
            return m.power(k)
        return None

    def monomial(self, e, env) -> QMonomial:
        try:
            m = self.mono(e, env)
        except QThetaError as err:
            raise err.with_span(getattr(e, "span", None))
        if m is not None:
            return m
        f = self.eval(e, env)
        if f.is_zero() and f.order == INF:
            return QMonomial(0, 0, self.space.ring.zero_exps)
        m = f.as_monomial()
        if m is None:
            raise DomainError("expected a monomial argument").with_span(getattr(e, "span", None))
        return m

    def bound(self, b: A.Bound, env) -> TerminationBound:
        weights = {}
        for name, w in b.weights:
            if name in self.point:
                continue
            weights[name] = weights.get(name, 0) + w
        if not any(weights.values()):
            raise ConfigurationError("termination bound only weighs substituted parameters",
                                     b.span)
        expr = b.expr
        outer = dict(env)
        return TerminationBound(weights, lambda e2: eval_int(expr, {**outer, **e2}))

    # -- main dispatch -----------------------------------------------------------
    def eval(self, e, env=None) -> QSeries:
        env = env or {}
        self.nodes += 1
        try:
            return self._eval(e, env)
        except QThetaError as err:
            raise err.with_span(getattr(e, "span", None))
        except ZeroDivisionError as err:
            raise NotInvertible(str(err)).with_span(getattr(e, "span", None)) from None

    def _eval(self, e, env) -> QSeries:
        sp = self.space
        m = self.mono(e, env)
        if m is not None:
            return sp.monomial(m)
        if isinstance(e, A.RationalLit):
            return sp.const(e.value)
        if isinstance(e, A.ParamRef):
            if e.name in self.point:
                return sp.const(self.point[e.name])
            return sp.param(e.name)
        if isinstance(e, A.IndexValue):
            return sp.const(env[e.name])
        if isinstance(e, A.VarRef):
            return sp.monomial(env[e.name])
        if isinstance(e, A.QPower):
            return sp.q(eval_int(e.exp, env))
        if isinstance(e, A.Neg):
            return -self.eval(e.operand, env)
        if isinstance(e, A.BinOp):
            if e.op in "+-":
                x, y = self.eval(e.left, env), self.eval(e.right, env)
                return x + y if e.op == "+" else x - y
            return self.product(e, env)
        if isinstance(e, A.Pow):
            return self.power(e, env)
        if isinstance(e, (A.PochFinite, A.PochInf)):
            return self.product(e, env)
        if isinstance(e, A.Phi):
            upper = [self.monomial(x, env) for x in e.upper]
            lower = [self.monomial(x, env) for x in e.lower]
            z = self.monomial(e.z, env)
            b = self.bound(e.bound, env) if e.bound is not None else None
            return phi(sp, upper, lower, e.base, z, b)
        if isinstance(e, A.Sum):
            return self.sum(e, env)
        if isinstance(e, A.BiSum):
            body = e.body
            return eval_bilateral(sp, e.index, self.bound(e.bound, env),
                                  lambda env2: self.eval(body, env2), env)
        if isinstance(e, A.QIntegral):
            lo, hi = self.monomial(e.lower, env), self.monomial(e.upper, env)
            b = self.bound(e.bound, env) if e.bound is not None else None
            body, var = e.body, e.var
            return q_integral(sp, lambda x: self.eval(body, {**env, var: x}), lo, hi, b)
        if isinstance(e, A.PartialTheta):
            return partial_theta(sp, self.monomial(e.arg, env))
        if isinstance(e, A.BigQJacobi):
            n = eval_int(e.n, env)
            if n < 0:
                raise DomainError(f"polynomial degree must be nonnegative, got {n}")
            args = [self.monomial(x, env) for x in (e.x, e.a, e.b, e.c)]
            return big_q_jacobi(sp, n, *args)
        raise TypeError(f"cannot evaluate {e!r}")

    def sum(self, e: A.Sum, env) -> QSeries:
        indices = []
        for d in e.indices:
            lo = d.lower
            lower = (lambda x: lambda env2: eval_int(x, env2))(lo)
            if d.upper == "inf":
                indices.append(Index(d.name, lower))
            elif d.upper == "-inf":
                indices.append(Index(d.name, lower, step=-1))
            else:
                hi = d.upper
                indices.append(Index(d.name, lower, (lambda x: lambda env2: eval_int(x, env2))(hi)))
        guard = None
        if e.guard is not None:
            g = e.guard
            guard = lambda env2: eval_int(g.expr, env2) % g.modulus == g.residue % g.modulus
        body = e.body
        spec = SumSpec(indices, self.bound(e.bound, env), lambda env2: self.eval(body, env2),
                       guard=guard, label=f"sum over {', '.join(d.name for d in e.indices)}")
        return eval_sum(self.space, spec, env)

    def power(self, e: A.Pow, env) -> QSeries:
        k = eval_int(e.exp, env)
        if isinstance(e.base, (A.PochFinite, A.PochInf)):
            return self.product(e, env)
        base = self.eval(e.base, env)
        m = base.as_monomial()
        if m is not None:
            if m.is_zero:
                if k < 0:
                    raise NotInvertible("zero to a negative power")
                return self.space.one() if k == 0 else self.space.zero()
            return self.space.monomial(m.power(k))
        if base.is_zero() and base.order == INF:
            if k < 0:
                raise NotInvertible("zero to a negative power")
            return self.space.one() if k == 0 else self.space.zero()
        return base ** k

    # -- products: Pochhammer factors are applied one (1 - x) at a time ----------
    def _collect(self, e, env, num, den, fin, inf, flip=False):
        if isinstance(e, A.BinOp) and e.op in "*/":
            self._collect(e.left, env, num, den, fin, inf, flip)
            self._collect(e.right, env, num, den, fin, inf, flip if e.op == "*" else not flip)
            return
        times = 1
        node = e
        if isinstance(e, A.Pow) and isinstance(e.base, (A.PochFinite, A.PochInf)):
            times = eval_int(e.exp, env)
            node = e.base
            if times < 0:
                times, flip = -times, not flip
        if isinstance(node, A.PochFinite):
            n = eval_int(node.count, env)
            if n < 0:
                raise DomainError(f"Pochhammer length must be nonnegative, got {n}").with_span(node.span)
            for a in node.args:
                x = self.monomial(a, env)
                for _ in range(times):
                    fin.extend((x.shift_q(node.base * j), flip) for j in range(n))
            return
        if isinstance(node, A.PochInf):
            for a in node.args:
                x = self.monomial(a, env)
                for _ in range(times):
                    inf.append((x, node.base, flip))
            return
        m = self.mono(e, env)
        if m is not None:
            (den if flip else num).append(m)
            return
        (den if flip else num).append(self.eval(e, env))

    def product(self, e, env) -> QSeries:
        sp = self.space
        num, den, fin, inf = [], [], [], []
        self._collect(e, env, num, den, fin, inf)
        mono = QMonomial(1, 0, sp.ring.zero_exps)
        general = []
        for f in num:
            m = f if isinstance(f, QMonomial) else f.as_monomial()
            if m is not None:
                mono = mono * m
            elif f.is_zero() and f.order == INF:
                return sp.zero()
            else:
                general.append(f)
        for f in den:
            m = f if isinstance(f, QMonomial) else f.as_monomial()
            if m is not None:
                mono = mono * m.inverse()
            elif f.is_zero() and f.order == INF:
                raise NotInvertible("division by zero")
            else:
                general.append(qs_invert(f))
        if mono.is_zero:
            return sp.zero()
        general.sort(key=lambda f: f.nterms())
        mul = [x for x, divide in fin if not divide and not x.is_zero]
        div = [x for x, divide in fin if divide and not x.is_zero]
        # later steps that can move terms down (in q or in a parameter); the
        # exact part is kept that far beyond the modulus before clipping
        k = sp.ring.nparams
        dq, dp = 0, [0] * k
        for f in general:
            dq += max(0, -f.val_bound)
            for c in f.coeffs.values():
                dp = [max(d, -t) if t != INF else d for d, t in zip(dp, c.tlo)]
        for x in div:
            if x.qexp < 0:
                dp = [d + max(0, e) for d, e in zip(dp, x.exps)]
        acc = _expand_exact(sp, mono, mul, dq, dp)
        for f in general:
            acc = acc * f
        for x in div:
            acc = acc.div_one_minus(x)
        for x, m, divide in inf:
            acc = apply_poch_inf(acc, [x], divide, m)
        return acc.capped()


def _expand_exact(sp: SeriesSpace, mono: QMonomial, factors, dq: int, dp) -> QSeries:
    """``mono * prod(1 - x)`` multiplied out before any clipping.

    Intermediate terms are only dropped when no remaining factor can bring
    them back below the modulus, so cancellations between large positive
    and negative exponents do not cost precision.
    """
    ring = sp.ring
    wcap = ring._cap
    k = ring.nparams
    # downward reach of the factors not yet applied
    rq = [0] * (len(factors) + 1)
    rp = [[0] * k for _ in range(len(factors) + 1)]
    for i in range(len(factors) - 1, -1, -1):
        x = factors[i]
        rq[i] = rq[i + 1] + max(0, -x.qexp)
        rp[i] = [a + max(0, -e) for a, e in zip(rp[i + 1], x.exps)]
    lost_q = lost_p = False
    low = INF

    def keep(q, e, i):
        nonlocal lost_q, lost_p, low
        if q >= sp.order + dq + rq[i]:
            lost_q = True
            return False
        for j in range(k):
            if e[j] >= wcap[j] + dp[j] + rp[i][j]:
                lost_p = True
                low = min(low, q - dq - rq[i])
                return False
        return True

    poly = {}
    if keep(mono.qexp, mono.exps, 0):
        poly[(mono.qexp, mono.exps)] = mono.coefficient
    for i, x in enumerate(factors):
        out = dict(poly)
        for (q, e), v in poly.items():
            q2 = q + x.qexp
            e2 = tuple(a + b for a, b in zip(e, x.exps))
            if not keep(q2, e2, i + 1):
                continue
            key = (q2, e2)
            w = out.get(key, 0) - v * x.coefficient
            if w:
                out[key] = w
            else:
                out.pop(key, None)
        poly = out
    # levels up to the extra depth stay, so a later factor of negative
    # valuation does not pull the claimed order below the modulus
    top = sp.order + dq
    levels = {}
    for (q, e), v in poly.items():
        if q >= top:
            lost_q = True
            continue
        if any(a >= c for a, c in zip(e, wcap)):
            lost_p = True
            low = min(low, q)
            continue
        levels.setdefault(q, {})[e] = v
    order = top if lost_q else INF
    if not lost_p:
        coeffs = {q: LaurentCoeff(ring, t) for q, t in levels.items()}
        return QSeries(sp, coeffs, order)
    start = min([low] + list(levels))
    coeffs = {}
    for q in range(start, top):
        t = levels.get(q, {})
        lo = LaurentCoeff(ring, t).tlo
        coeffs[q] = LaurentCoeff(ring, t, wcap, tuple(min(a, 0) for a in lo), True)
    return QSeries(sp, coeffs, top)


def evaluate(expr, space: SeriesSpace, point=None) -> QSeries:
    return Evaluator(space, point).eval(expr)
