"""Truncated Laurent series in q over windowed Laurent coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coeffring import (INF, CoeffAccumulator, CoeffRing, LaurentCoeff, as_rational, coeff_invert,
                        coeff_invert_monomial, rdiv, render_monomial, render_terms)
from .errors import ConfigurationError, DomainError, NotInvertible


@dataclass(frozen=True)
class QMonomial:
    """``coefficient * q^qexp * params^exps`` with *oriented* parameter exponents."""

    coefficient: object
    qexp: int
    exps: tuple

    @property
    def is_zero(self) -> bool:
        return self.coefficient == 0

    def __mul__(self, other: "QMonomial") -> "QMonomial":
        return QMonomial(self.coefficient * other.coefficient, self.qexp + other.qexp,
                         tuple(a + b for a, b in zip(self.exps, other.exps)))

    def inverse(self) -> "QMonomial":
        if self.is_zero:
            raise NotInvertible("zero monomial")
        return QMonomial(rdiv(1, self.coefficient), -self.qexp, tuple(-e for e in self.exps))

    def shift_q(self, k: int) -> "QMonomial":
        return QMonomial(self.coefficient, self.qexp + k, self.exps)

    def power(self, n: int) -> "QMonomial":
        if n < 0:
            return self.inverse().power(-n)
        return QMonomial(as_rational(self.coefficient ** n), self.qexp * n,
                         tuple(e * n for e in self.exps))


class SeriesSpace:
    """A coefficient ring plus the global (working) q-order cap."""

    def __init__(self, ring: CoeffRing, order: int):
        if order < 1:
            raise ConfigurationError("order must be at least 1")
        self.ring = ring
        self.order = order

    @classmethod
    def make(cls, names=(), degree: int = 0, order: int = 10, inverted=()):
        return cls(CoeffRing.make(names, degree, inverted), order)

    @property
    def params(self):
        return self.ring.params

    def __eq__(self, other):
        return (isinstance(other, SeriesSpace) and self.ring == other.ring
                and self.order == other.order)

    def __hash__(self):
        return hash((self.ring, self.order))

    def zero(self) -> "QSeries":
        return QSeries(self, {}, INF)

    def one(self) -> "QSeries":
        return self.const(1)

    def const(self, value) -> "QSeries":
        return self.monomial(QMonomial(as_rational(value), 0, self.ring.zero_exps))

    def monomial(self, m: QMonomial) -> "QSeries":
        if m.is_zero:
            return self.zero()
        if m.qexp >= self.order:
            return QSeries(self, {}, self.order)
        c = self.ring.monomial(m.exps, m.coefficient)
        return QSeries(self, {m.qexp: c}, INF)

    def q(self, k: int = 1) -> "QSeries":
        return self.monomial(QMonomial(1, k, self.ring.zero_exps))

    def param(self, name: str, power: int = 1) -> "QSeries":
        return self.monomial(self.qmono(1, 0, {name: power}))

    def qmono(self, coefficient=1, qexp: int = 0, params=None) -> QMonomial:
        exps = self.ring.params.exps_from_map(params or {})
        return QMonomial(as_rational(coefficient), qexp, exps)

    def from_levels(self, levels: dict, order=INF) -> "QSeries":
        """Exact series from ``{qexp: {raw exponent tuple or name-map: coeff}}``."""
        out = {}
        for k, terms in levels.items():
            c = self.ring.zero()
            for key, v in terms.items():
                if isinstance(key, dict) or key == ():
                    key = self.ring.params.exps_from_map(key or {})
                else:
                    key = self.ring.params.orient(key)
                c = c + self.ring.monomial(key, v)
            if not c.is_exact_zero():
                out[k] = c
        return QSeries(self, out, order).capped()


class QSeries:
    """Immutable truncated Laurent series ``sum c_k q^k + O(q^order)``."""

    __slots__ = ("space", "coeffs", "order")

    def __init__(self, space: SeriesSpace, coeffs: dict, order=INF):
        self.space = space
        self.coeffs = {k: v for k, v in coeffs.items() if k < order and not v.is_exact_zero()}
        self.order = order

    # --- inspection -------------------------------------------------------
    @property
    def ring(self) -> CoeffRing:
        return self.space.ring

    @property
    def valuation(self):
        """Least stored q-exponent (INF for zero)."""
        return min(self.coeffs) if self.coeffs else INF

    @property
    def val_bound(self):
        """Lower bound on the q-valuation of the true series."""
        return min(self.valuation, self.order)

    def __getitem__(self, k: int) -> LaurentCoeff:
        if k >= self.order:
            raise IndexError(f"q^{k} is beyond O(q^{self.order})")
        return self.coeffs.get(k, self.ring.zero())

    def levels(self):
        return sorted(self.coeffs.items())

    @property
    def clipped(self) -> bool:
        return any(c.clipped for c in self.coeffs.values())

    @property
    def exact(self) -> bool:
        return self.order == INF and all(c.exact for c in self.coeffs.values())

    def is_zero(self) -> bool:
        return not any(c.terms for c in self.coeffs.values())

    def nterms(self) -> int:
        return sum(len(c.terms) for c in self.coeffs.values())

    def as_monomial(self) -> QMonomial | None:
        if self.order != INF or len(self.coeffs) != 1:
            return None
        (k, c), = self.coeffs.items()
        if not c.is_monomial():
            return None
        (e, v), = c.terms.items()
        return QMonomial(v, k, e)

    def capped(self) -> "QSeries":
        cap = self.space.order
        if self.order <= cap or not self.coeffs or max(self.coeffs) < cap:
            return self
        return QSeries(self.space, self.coeffs, cap)

    def truncate(self, order) -> "QSeries":
        return QSeries(self.space, self.coeffs, min(self.order, order))

    def __repr__(self):
        return f"QSeries({render_series(self)})"

    def __str__(self):
        return render_series(self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.space.const(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.order != other.order:
            return False
        return {k: c.terms for k, c in self.coeffs.items() if c.terms} == \
            {k: c.terms for k, c in other.coeffs.items() if c.terms}

    __hash__ = None

    # --- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.space.const(other)
        if not isinstance(other, QSeries):
            raise TypeError(f"cannot combine QSeries with {type(other).__name__}")
        if other.space is not self.space and other.space != self.space:
            raise ConfigurationError("series live in different spaces (params/window/order)")
        return other

    def __add__(self, other):
        return qs_add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.space, {k: -c for k, c in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        return qs_add(self, -self._coerce(other))

    def __rsub__(self, other):
        return qs_add(-self, self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return qs_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(rdiv(1, other))
        return qs_mul(self, qs_invert(self._coerce(other)))

    def __rtruediv__(self, other):
        return qs_mul(self._coerce(other), qs_invert(self))

    def __pow__(self, n: int):
        if n < 0:
            return qs_invert(self) ** (-n)
        out = self.space.one()
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "QSeries":
        c = as_rational(c)
        if not c:
            return QSeries(self.space, {}, self.order if self.order != INF else INF)
        return QSeries(self.space, {k: v.scale(c) for k, v in self.coeffs.items()}, self.order)

    def mul_monomial(self, m: QMonomial) -> "QSeries":
        if m.is_zero:
            return self.space.zero()
        coeffs = {k + m.qexp: c.mul_monomial(m.exps, m.coefficient)
                  for k, c in self.coeffs.items()}
        return QSeries(self.space, coeffs, self.order + m.qexp).capped()

    def mul_one_minus(self, m: QMonomial) -> "QSeries":
        """``self * (1 - m)`` without building the binomial."""
        if m.is_zero:
            return self
        return qs_add(self, -self.mul_monomial(m))

    def div_one_minus(self, m: QMonomial) -> "QSeries":
        """``self / (1 - m)`` by the geometric recurrence (exact within the modulus)."""
        if m.is_zero:
            return self
        if m.qexp < 0 or (m.qexp == 0 and all(e <= 0 for e in m.exps) and any(m.exps)):
            # 1/(1-m) = -m^{-1} / (1 - m^{-1})
            inv = m.inverse()
            return self.mul_monomial(QMonomial(-inv.coefficient, inv.qexp, inv.exps)).div_one_minus(inv)
        if m.qexp == 0:
            if not any(m.exps):
                if m.coefficient == 1:
                    raise NotInvertible("division by (1 - 1)")
                return self.scale(rdiv(1, 1 - m.coefficient))
            if any(e < 0 for e in m.exps):
                raise NotInvertible(
                    "1 - m with m of mixed-sign degree in graded parameters is not invertible "
                    "in the windowed ring")
            coeffs = {}
            for k, c in self.coeffs.items():
                acc = c
                t = c
                while True:
                    t = t.mul_monomial(m.exps, m.coefficient)
                    acc = acc + t
                    if not t.terms:
                        break
                coeffs[k] = acc
            return QSeries(self.space, coeffs, self.order)
        j = m.qexp
        if not self.coeffs:
            return self
        order = min(self.order, self.space.order)
        out = {}
        for k in range(min(self.coeffs), order):
            c = self.coeffs.get(k)
            prev = out.get(k - j)
            if prev is not None:
                t = prev.mul_monomial(m.exps, m.coefficient)
                c = t if c is None else c + t
            if c is not None and not c.is_exact_zero():
                out[k] = c
        return QSeries(self.space, out, order)

    def with_caps(self, cap) -> "QSeries":
        """Restrict the claimed precision of every level to ``cap``."""
        if all(c == INF for c in cap):
            return self
        order = min(self.order, self.space.order)
        zero = self.ring.zero()
        lo = min(self.coeffs) if self.coeffs else 0
        coeffs = {k: self.coeffs.get(k, zero).truncate_to(cap) for k in range(min(lo, 0), order)}
        coeffs = {k: LaurentCoeff(c.ring, c.terms, c.cap, tuple(min(t, 0) for t in c.tlo), True)
                  if not c.terms else c for k, c in coeffs.items()}
        return QSeries(self.space, coeffs, order)


class SeriesAccumulator:
    """Mutable running sum of series; avoids re-copying a growing total."""

    def __init__(self, space: SeriesSpace):
        self.space = space
        self.levels: dict = {}
        self.order = INF

    def add(self, f: "QSeries"):
        if f.order < self.order:
            self.order = f.order
            for k in [k for k in self.levels if k >= f.order]:
                del self.levels[k]
        order = self.order
        levels = self.levels
        for k, c in f.coeffs.items():
            if k >= order:
                continue
            slot = levels.get(k)
            if slot is None:
                levels[k] = CoeffAccumulator(c)
            else:
                slot.add(c)

    def value(self) -> "QSeries":
        return QSeries(self.space, {k: a.value() for k, a in self.levels.items()}, self.order)


def qs_add(f: QSeries, g: QSeries) -> QSeries:
    order = min(f.order, g.order)
    coeffs = {}
    for k, c in f.coeffs.items():
        if k < order:
            coeffs[k] = c
    for k, c in g.coeffs.items():
        if k < order:
            coeffs[k] = coeffs[k] + c if k in coeffs else c
    return QSeries(f.space, coeffs, order)


def qs_mul(f: QSeries, g: QSeries) -> QSeries:
    space = f.space
    if g.space is not space and g.space != space:
        raise ConfigurationError("series live in different spaces (params/window/order)")
    if (not f.coeffs and f.order == INF) or (not g.coeffs and g.order == INF):
        return space.zero()
    order = min(f.order + g.val_bound, g.order + f.val_bound)
    mf = f.as_monomial()
    if mf is not None:
        return g.mul_monomial(mf).truncate(order)
    mg = g.as_monomial()
    if mg is not None:
        return f.mul_monomial(mg).truncate(order)
    if order == INF:
        hi = max(f.coeffs) + max(g.coeffs)
        if hi >= space.order:
            order = space.order
    else:
        order = min(order, space.order)
    out: dict = {}
    for i, a in f.coeffs.items():
        for j, b in g.coeffs.items():
            k = i + j
            if k >= order:
                continue
            p = a * b
            out[k] = out[k] + p if k in out else p
    return QSeries(space, out, order)


def qs_invert(f: QSeries) -> QSeries:
    """Inverse of a series whose leading coefficient is invertible.

    The leading coefficient must be an exact monomial or have a nonzero
    constant term (see ``coeff_invert``).
    """
    space = f.space
    if not f.coeffs:
        raise NotInvertible("zero series")
    mono = f.as_monomial()
    if mono is not None:
        return space.monomial(mono.inverse())
    v = f.valuation
    lead = f.coeffs[v]
    if lead.is_monomial():
        linv = coeff_invert_monomial(lead)
    else:
        linv = coeff_invert(lead)
    # h = f * q^-v * linv, with h[0] = 1 (+ unknown terms beyond the caps)
    h = {k - v: c * linv for k, c in f.coeffs.items()}
    horder = f.order - v
    gorder = min(horder, space.order + v) if horder != INF else space.order + v
    h0 = h[0]
    g0 = coeff_invert(h0) if not (h0.is_monomial() and h0.constant_term() == 1) else h0
    g = {0: g0}
    zero = space.ring.zero()
    for n in range(1, gorder if gorder != INF else 0):
        acc = zero
        for j, hj in h.items():
            if 1 <= j <= n and (n - j) in g:
                acc = acc + hj * g[n - j]
        if not acc.is_exact_zero():
            g[n] = -(acc * g0)
    out = {n - v: c * linv for n, c in g.items()}
    return QSeries(space, out, gorder - v).capped()


def poch_finite(space: SeriesSpace, x: QMonomial, m: int, n: int) -> QSeries:
    """``(x; q^m)_n`` as an exact (then order-capped) series."""
    if m < 1:
        raise DomainError("base exponent must be positive")
    if n < 0:
        raise DomainError(f"(x; q)_n with negative n={n} is not supported")
    out = space.one()
    for j in range(n):
        out = out.mul_one_minus(x.shift_q(m * j))
    return out.capped()


def poch_finite_div(f: QSeries, x: QMonomial, m: int, n: int) -> QSeries:
    """``f / (x; q^m)_n`` factor by factor."""
    if n < 0:
        raise DomainError(f"(x; q)_n with negative n={n} is not supported")
    for j in range(n):
        f = f.div_one_minus(x.shift_q(m * j))
    return f


def poch_factors_inf(space: SeriesSpace, x: QMonomial, m: int, slack: int = 0):
    """Factors ``x q^{mj}`` of ``(x; q^m)_oo`` that differ from 1 below the cap."""
    if m < 1:
        raise DomainError("base exponent must be positive")
    if x.qexp < 0:
        raise DomainError("(x; q)_oo needs x of nonnegative q-degree")
    if x.is_zero:
        return []
    limit = space.order + max(0, slack)
    out = []
    j = 0
    while x.qexp + m * j < limit:
        out.append(x.shift_q(m * j))
        j += 1
    return out


def poch_inf(space: SeriesSpace, x: QMonomial, m: int = 1, slack: int = 0) -> QSeries:
    """``(x; q^m)_oo`` truncated at the working order."""
    if x.is_zero:
        return space.one()
    out = space.one()
    for f in poch_factors_inf(space, x, m, slack):
        out = out.mul_one_minus(f)
    order = space.order
    return out.truncate(order) if out.order > order else out


def qs_subst_param(f: QSeries, name: str, m: QMonomial) -> QSeries:
    """Substitute ``name -> m`` homomorphically (``x^k -> m^k``).

    Supported when ``m`` has q-degree >= 0, ``name`` is graded upwards and the
    input is exact in ``name`` or ``m`` has positive q-degree.
    """
    space = f.space
    params = space.params
    idx = params.index(name)
    if name in params.inverted:
        raise DomainError("substitution into an inverted-graded parameter")
    if m.qexp < 0:
        raise DomainError("substitution would create unbounded negative q-exponents")
    if any(e < 0 for e in m.exps):
        raise DomainError("substituted monomial must have nonnegative graded degrees")
    order = f.order
    for k, c in f.coeffs.items():
        if c.tlo[idx] < 0:
            raise DomainError("negative powers of the substituted variable")
        if c.cap[idx] != INF:
            if m.qexp == 0:
                raise DomainError("cannot substitute a q-free monomial into a truncated variable")
            order = min(order, k + c.cap[idx] * m.qexp)
    other_cap = [INF] * len(params)
    for c in f.coeffs.values():
        for i, x in enumerate(c.cap):
            if i != idx:
                other_cap[i] = min(other_cap[i], x)
    out = space.zero()
    for k, c in f.coeffs.items():
        for e, v in c.terms.items():
            mono = m.power(e[idx])
            base = list(e)
            base[idx] = 0
            term = QMonomial(v * mono.coefficient, k + mono.qexp,
                             tuple(a + b for a, b in zip(base, mono.exps)))
            out = out + space.monomial(term)
    return out.truncate(order).capped().with_caps(other_cap)


# --- rendering ----------------------------------------------------------------

def render_series(f: QSeries) -> str:
    names = f.ring.params.names
    pieces = []
    for k, c in f.levels():
        for raw, v in c.items_raw():
            mono = render_monomial(names, raw)
            qpart = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            pieces.append((v, "*".join(p for p in (mono, qpart) if p)))
    body = render_terms(pieces)
    if f.order == INF:
        return body
    tail = f"O(q^{f.order})"
    return tail if body == "0" else f"{body} + {tail}"
