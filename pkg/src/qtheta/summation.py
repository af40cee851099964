"""Formal sums with declared, runtime-checked termination bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .coeffring import INF
from .errors import BoundViolation, ConfigurationError, NonTermination
from .qseries import QMonomial, QSeries, SeriesAccumulator, SeriesSpace

IntFn = Callable[[Mapping[str, int]], int]


@dataclass(frozen=True)
class TerminationBound:
    """Every summand satisfies ``min(functional . exponents) >= bound(indices)``.

    ``functional`` maps ``"q"`` and parameter names to integer weights on the
    raw exponents.  Weights on parameters must point in the parameter's
    graded direction (positive for ordinary parameters, negative for
    ``1/x``-graded ones) so the functional is bounded on the window.
    """

    functional: Mapping[str, int]
    bound: IntFn

    def oriented(self, space: SeriesSpace):
        params = space.params
        wq = self.functional.get("q", 0)
        ws = [0] * len(params)
        for name, w in self.functional.items():
            if name == "q":
                continue
            i = params.index(name)
            ws[i] = w * params.signs[i]
        if wq < 0 or any(w < 0 for w in ws):
            raise ConfigurationError(
                f"termination functional {dict(self.functional)} is unbounded on the window")
        if wq == 0 and not any(ws):
            raise ConfigurationError("termination functional is identically zero")
        return wq, tuple(ws)

    def region_max(self, space: SeriesSpace) -> int:
        wq, ws = self.oriented(space)
        return wq * (space.order - 1) + sum(w * u for w, u in zip(ws, space.ring.window.upper))


@dataclass(frozen=True)
class Index:
    name: str
    lower: IntFn
    upper: Optional[IntFn] = None  # None: unbounded
    step: int = 1


@dataclass
class SumSpec:
    indices: Sequence[Index]
    bound: TerminationBound
    body: Callable[[dict], QSeries]
    guard: Optional[Callable[[dict], bool]] = None
    max_terms: Optional[int] = None
    label: str = "sum"
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.indices:
            raise ConfigurationError("a sum needs at least one index")


def weighted_valuation(f: QSeries, weights) -> float:
    """min over stored monomials of ``wq*qexp + ws . exps`` (oriented)."""
    wq, ws = weights
    best = INF
    for k, c in f.coeffs.items():
        base = wq * k
        for e in c.terms:
            v = base
            for w, x in zip(ws, e):
                if w:
                    v += w * x
            if v < best:
                best = v
    return best


def eval_sum(space: SeriesSpace, spec: SumSpec, env: Optional[Mapping[str, int]] = None) -> QSeries:
    """Accumulate the summands until the declared bound leaves the window."""
    env = dict(env or {})
    weights = spec.bound.oriented(space)
    top = spec.bound.region_max(space)
    # cap on consecutive values of a single index; a bound that never grows
    # would otherwise loop forever
    hard_cap = spec.max_terms or 10 * space.order + 100
    state = {"count": 0, "stopped": False}
    total = SeriesAccumulator(space)
    bound = spec.bound.bound
    indices = list(spec.indices)

    def probe(level, env):
        # bound at the least index values below ``level``
        e = dict(env)
        for idx in indices[level:]:
            e[idx.name] = idx.lower(e)
        return e

    def run(level, env):
        idx = indices[level]
        i = idx.lower(env)
        last = None
        seen = 0
        while True:
            if idx.upper is not None:
                hi = idx.upper(env)
                if (idx.step > 0 and i > hi) or (idx.step < 0 and i < hi):
                    return
            e = dict(env)
            e[idx.name] = i
            if level + 1 < len(indices):
                b = bound(probe(level + 1, e))
            else:
                b = bound(e)
            if last is not None and b < last:
                raise BoundViolation(
                    f"{spec.label}: termination bound decreased from {last} to {b} "
                    f"at {idx.name}={i}")
            last = b
            if b > top:
                state["stopped"] = True
                return
            state["count"] += 1
            seen += 1
            if seen > hard_cap:
                raise NonTermination(
                    f"{spec.label}: more than {hard_cap} values of {idx.name} visited")
            if level + 1 < len(indices):
                run(level + 1, e)
            elif spec.guard is None or spec.guard(e):
                term = spec.body(e)
                v = weighted_valuation(term, weights)
                if v < b:
                    raise BoundViolation(
                        f"{spec.label}: term at {_fmt(e, indices)} has weighted valuation {v} "
                        f"below the declared bound {b}")
                total.add(term)
            i += idx.step

    run(0, env)
    acc = total.value()
    spec.stats["terms"] = state["count"]
    if state["stopped"]:
        wq, ws = weights
        if wq:
            acc = acc.truncate(space.order)
        cap = tuple(u + 1 if w else INF for w, u in zip(ws, space.ring.window.upper))
        if any(w for w in ws):
            if acc.order == INF:
                acc = acc.truncate(space.order)
            acc = acc.with_caps(cap)
    return acc.capped()


def _fmt(env, indices):
    return ", ".join(f"{i.name}={env[i.name]}" for i in indices)


def eval_bilateral(space: SeriesSpace, name: str, bound: TerminationBound,
                   body: Callable[[dict], QSeries], env=None, label="bisum") -> QSeries:
    """Sum over all integers as the n >= 0 branch plus the n <= -1 branch."""
    pos = SumSpec([Index(name, lambda e: 0)], bound, body, label=label + "[n>=0]")
    neg = SumSpec([Index(name, lambda e: -1, step=-1)], bound, body, label=label + "[n<0]")
    return eval_sum(space, pos, env) + eval_sum(space, neg, env)


def _terminating_length(upper: Sequence[QMonomial], m: int) -> Optional[int]:
    best = None
    for a in upper:
        if a.coefficient == 1 and not any(a.exps) and a.qexp <= 0 and a.qexp % m == 0:
            n = -a.qexp // m
            best = n if best is None else min(best, n)
    return best


def phi(space: SeriesSpace, upper: Sequence[QMonomial], lower: Sequence[QMonomial], m: int,
        z: QMonomial, bound: Optional[TerminationBound] = None) -> QSeries:
    """Basic hypergeometric series ``r_phi_s(upper; lower; q^m, z)``.

    Terms are built incrementally from the previous one.  Terminates either
    through an upper parameter ``q^{-nm}`` or through ``bound`` (index name
    ``n``); without either a q-graded default bound is derived when all
    arguments have nonnegative q-degree.
    """
    r, s = len(upper), len(lower)
    e = 1 + s - r
    if z.is_zero:
        return space.one()
    stop = _terminating_length(upper, m)
    if bound is None:
        if stop is None:
            if any(x.qexp < 0 for x in list(upper) + list(lower)):
                raise NonTermination("phi: negative q-degree arguments need an explicit bound")
            qz = z.qexp
            if qz <= 0 and e <= 0:
                raise NonTermination("phi: neither terminating nor q-convergent; supply a bound")
            bound = TerminationBound({"q": 1}, lambda env: env["n"] * qz + e * m * env["n"] * (env["n"] - 1) // 2)
        else:
            bound = TerminationBound({"q": 1}, lambda env: -10 ** 9)
    cache = {}

    def body(env):
        n = env["n"]
        if n == 0:
            t = space.one()
        else:
            t = cache[n - 1]
            j = m * (n - 1)
            for a in upper:
                t = t.mul_one_minus(a.shift_q(j))
            t = t.div_one_minus(QMonomial(1, m * n, space.ring.zero_exps))
            for b in lower:
                t = t.div_one_minus(b.shift_q(j))
            t = t.mul_monomial(z)
            if e:
                sign = (-1) ** (e % 2)
                t = t.mul_monomial(QMonomial(sign, e * j, space.ring.zero_exps))
        cache[n] = t
        cache.pop(n - 2, None)
        return t

    upper_fn = (lambda env: stop) if stop is not None else None
    spec = SumSpec([Index("n", lambda env: 0, upper_fn)], bound, body, label="phi")
    return eval_sum(space, spec)


def q_integral(space: SeriesSpace, integrand: Callable[[QMonomial], QSeries], lower: QMonomial,
               upper: QMonomial, bound: Optional[TerminationBound] = None) -> QSeries:
    """Jackson integral ``(1-q) sum_n (u f(u q^n) - l f(l q^n)) q^n``."""
    if bound is None:
        c0 = min([x.qexp for x in (lower, upper) if not x.is_zero] or [0])
        bound = TerminationBound({"q": 1}, lambda env: env["n"] + c0)

    def body(env):
        n = env["n"]
        out = space.zero()
        for end, sign in ((upper, 1), (lower, -1)):
            if end.is_zero:
                continue
            x = end.shift_q(n)
            val = integrand(x)
            out = out + val.mul_monomial(QMonomial(sign * end.coefficient, end.qexp + n, end.exps))
        return out

    spec = SumSpec([Index("n", lambda env: 0)], bound, body, label="qint")
    return eval_sum(space, spec).mul_one_minus(QMonomial(1, 1, space.ring.zero_exps))
