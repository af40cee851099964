"""Exact coefficient ring: windowed sparse Laurent polynomials over Q.

A ``LaurentCoeff`` is a truncated element of a Laurent series ring in the
declared parameters.  Every parameter is graded in one direction: by default
high positive exponents are "small" and get truncated; parameters declared
``inverted`` are graded by their negative exponents instead (e.g. ``1/b``).
Internally exponents are stored *oriented*, i.e. already multiplied by the
grading sign, so truncation always cuts large oriented exponents.

Besides the stored terms every value carries precision metadata:

``cap``
    per-parameter bound; the stored coefficient of a monomial ``e`` is the
    true coefficient whenever ``e[x] < cap[x]`` for every ``x``.
    ``INF`` everywhere means the value is known exactly.
``tlo``
    per-parameter lower bound on the oriented exponents of *all* true terms,
    including the ones lost to truncation.

The multiplication rule propagates both, so a truncated computation never
claims a coefficient it could not have computed.  ``clipped`` records that
some truncation happened along the way.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from operator import add as _add
from typing import Iterable, Mapping

from .errors import ConfigurationError, EvaluationError, NotInvertible

INF = float("inf")

Rational = Fraction


def as_rational(value) -> Fraction | int:
    """Normalise ints/Fractions/strings to an exact value (ints stay ints)."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        return as_rational(Fraction(value))
    raise TypeError(f"not an exact rational: {value!r}")


def rdiv(a, b):
    """Exact quotient keeping integers as ints when possible."""
    if isinstance(a, int) and isinstance(b, int) and b != 0 and a % b == 0:
        return a // b
    return as_rational(Fraction(a) / Fraction(b))


@dataclass(frozen=True)
class ParamSet:
    """Ordered parameter names; ``inverted`` ones are graded by ``1/x``."""

    names: tuple[str, ...]
    inverted: frozenset = frozenset()

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "inverted", frozenset(self.inverted))
        if len(set(names)) != len(names):
            raise ConfigurationError(f"duplicate parameter names in {names}")
        if "q" in names:
            raise ConfigurationError("q is the series variable, not a parameter")
        extra = self.inverted - set(names)
        if extra:
            raise ConfigurationError(f"inverted grading for undeclared {sorted(extra)}")

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ConfigurationError(f"unknown parameter {name!r}") from None

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(-1 if n in self.inverted else 1 for n in self.names)

    def orient(self, raw: Iterable[int]) -> tuple[int, ...]:
        return tuple(s * e for s, e in zip(self.signs, raw))

    # orientation is an involution
    raw = orient

    def exps_from_map(self, mapping: Mapping[str, int]) -> tuple[int, ...]:
        raw = [0] * len(self.names)
        for name, e in mapping.items():
            raw[self.index(name)] += e
        return self.orient(raw)

    def restrict(self, keep: Iterable[str]) -> "ParamSet":
        keep = set(keep)
        names = tuple(n for n in self.names if n in keep)
        return ParamSet(names, frozenset(self.inverted & set(names)))


@dataclass(frozen=True)
class Window:
    """Per-parameter exponent window, in oriented units.

    ``upper[x]`` is the largest kept exponent (truncation happens above it);
    ``lower[x]`` is only used to delimit verification reports.
    """

    upper: tuple[int, ...]
    lower: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "lower", tuple(self.lower))
        if len(self.upper) != len(self.lower):
            raise ConfigurationError("window bounds have different lengths")
        for lo, hi in zip(self.lower, self.upper):
            if not lo <= 0 <= hi:
                raise ConfigurationError(f"window needs L <= 0 <= U, got [{lo}, {hi}]")

    @classmethod
    def uniform(cls, params: ParamSet, degree: int) -> "Window":
        k = len(params)
        return cls((degree,) * k, (-degree,) * k)

    @property
    def cap(self) -> tuple[int, ...]:
        return tuple(u + 1 for u in self.upper)

    def widened(self, extra: int) -> "Window":
        return Window(tuple(u + extra for u in self.upper), self.lower)


@dataclass(frozen=True)
class CoeffRing:
    params: ParamSet
    window: Window

    def __post_init__(self):
        if len(self.window.upper) != len(self.params):
            raise ConfigurationError("window does not match the parameter set")
        object.__setattr__(self, "_cap", self.window.cap)
        object.__setattr__(self, "_zero", (0,) * len(self.params))

    @classmethod
    def make(cls, names: Iterable[str], degree: int, inverted=()) -> "CoeffRing":
        params = ParamSet(tuple(names), frozenset(inverted))
        return cls(params, Window.uniform(params, degree))

    @property
    def nparams(self) -> int:
        return len(self.params)

    @property
    def zero_exps(self) -> tuple[int, ...]:
        return self._zero

    def zero(self) -> "LaurentCoeff":
        return LaurentCoeff(self, {})

    def one(self) -> "LaurentCoeff":
        return LaurentCoeff(self, {self._zero: 1})

    def const(self, value) -> "LaurentCoeff":
        value = as_rational(value)
        return LaurentCoeff(self, {self._zero: value} if value else {})

    def monomial(self, exps, coeff=1) -> "LaurentCoeff":
        """Monomial from *oriented* exponents (clipped like any product)."""
        exps = tuple(exps)
        if len(exps) != self.nparams:
            raise ConfigurationError("exponent vector has the wrong length")
        coeff = as_rational(coeff)
        if not coeff:
            return self.zero()
        return self.one().mul_monomial(exps, coeff)

    def param(self, name: str, power: int = 1) -> "LaurentCoeff":
        return self.monomial(self.params.exps_from_map({name: power}))

    def from_raw(self, terms: Mapping[tuple, object]) -> "LaurentCoeff":
        """Build an exact value from raw (unoriented) exponent tuples."""
        out = self.zero()
        for raw, c in terms.items():
            out = out + self.monomial(self.params.orient(raw), c)
        return out


def _min_vec(a, b):
    return tuple(x if x <= y else y for x, y in zip(a, b))


def _vec_lo(terms) -> tuple:
    it = iter(terms)
    try:
        lo = list(next(it))
    except StopIteration:
        return None
    for e in it:
        for i, x in enumerate(e):
            if x < lo[i]:
                lo[i] = x
    return tuple(lo)


def _relevant_lo(terms, wcap, other_tlo, k):
    """Lowest exponents of the terms that can still land inside the window
    when multiplied by a true term of the other factor."""
    limit = [w - 1 - t for w, t in zip(wcap, other_tlo)]
    lo = [INF] * k
    for e in terms:
        ok = True
        for x, l in zip(e, limit):
            if x > l:
                ok = False
                break
        if ok:
            for i, x in enumerate(e):
                if x < lo[i]:
                    lo[i] = x
    return lo


class LaurentCoeff:
    """Immutable truncated Laurent polynomial; see the module docstring."""

    __slots__ = ("ring", "terms", "cap", "tlo", "clipped")

    def __init__(self, ring: CoeffRing, terms: dict, cap=None, tlo=None, clipped=False):
        k = ring.nparams
        self.ring = ring
        self.terms = terms
        self.cap = (INF,) * k if cap is None else tuple(cap)
        if tlo is None:
            lo = _vec_lo(terms)
            tlo = (INF,) * k if lo is None else lo
        self.tlo = tuple(tlo)
        self.clipped = clipped

    # --- inspection -------------------------------------------------------
    @property
    def exact(self) -> bool:
        return all(c == INF for c in self.cap)

    def is_exact_zero(self) -> bool:
        return not self.terms and self.exact

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def constant_term(self):
        return self.terms.get(self.ring.zero_exps, 0)

    def items_raw(self):
        """(raw exponent tuple, coefficient) pairs in lexicographic order."""
        orient = self.ring.params.orient
        return sorted((orient(e), c) for e, c in self.terms.items())

    def is_monomial(self) -> bool:
        return self.exact and len(self.terms) == 1

    def known_at(self, exps) -> bool:
        return all(e < c for e, c in zip(exps, self.cap))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, LaurentCoeff):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        s = render_coeff(self)
        if not self.exact:
            s += " + O(...)"
        return f"LaurentCoeff({s})"

    # --- arithmetic -------------------------------------------------------
    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        if not isinstance(other, LaurentCoeff):
            raise TypeError(f"cannot combine LaurentCoeff with {type(other).__name__}")
        if other.ring != self.ring:
            raise ConfigurationError("coefficients live in different rings (params/window)")
        return other

    def __add__(self, other):
        return coeff_add(self, self._check(other))

    __radd__ = __add__

    def __neg__(self):
        return LaurentCoeff(self.ring, {e: -c for e, c in self.terms.items()},
                            self.cap, self.tlo, self.clipped)

    def __sub__(self, other):
        return coeff_add(self, -self._check(other))

    def __rsub__(self, other):
        return coeff_add(-self, self._check(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return coeff_mul(self, self._check(other))

    __rmul__ = __mul__

    def scale(self, c) -> "LaurentCoeff":
        c = as_rational(c)
        if not c:
            return LaurentCoeff(self.ring, {}, self.cap, self.tlo, self.clipped)
        if c == 1:
            return self
        return LaurentCoeff(self.ring, {e: v * c for e, v in self.terms.items()},
                            self.cap, self.tlo, self.clipped)

    def mul_monomial(self, exps, coeff=1) -> "LaurentCoeff":
        """Multiply by ``coeff * p^exps`` (oriented exponents); clips at the window."""
        ring = self.ring
        wcap = ring._cap
        coeff = as_rational(coeff)
        exps = tuple(exps)
        cap = tuple(c + e for c, e in zip(self.cap, exps))
        tlo = tuple(t + e for t, e in zip(self.tlo, exps))
        # stored exponents are always below the window cap, so only the
        # coordinates that move upwards need checking
        checks = [(i, w - e) for i, (e, w) in enumerate(zip(exps, wcap)) if e > 0]
        dropped = False
        if not any(exps):
            terms = {e: v * coeff for e, v in self.terms.items()} if coeff != 1 else dict(self.terms)
        elif not checks:
            terms = {tuple(map(_add, e, exps)): v * coeff for e, v in self.terms.items()}
        else:
            terms = {}
            for e, v in self.terms.items():
                for i, lim in checks:
                    if e[i] >= lim:
                        dropped = True
                        break
                else:
                    terms[tuple(map(_add, e, exps))] = v * coeff
        if dropped:
            cap = _min_vec(cap, wcap)
        return LaurentCoeff(ring, terms, cap, tlo, self.clipped or dropped)

    def truncate_to(self, cap) -> "LaurentCoeff":
        """Forget everything at or beyond ``cap`` (a tighter precision)."""
        cap = _min_vec(self.cap, cap)
        terms = {e: v for e, v in self.terms.items()
                 if all(x < c for x, c in zip(e, cap))}
        return LaurentCoeff(self.ring, terms, cap, self.tlo, self.clipped)

    def __pow__(self, n: int):
        if n < 0:
            return coeff_invert(self) ** (-n)
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out


def _below(e, cap) -> bool:
    for x, c in zip(e, cap):
        if x >= c:
            return False
    return True


def coeff_add(p: LaurentCoeff, r: LaurentCoeff) -> LaurentCoeff:
    """Termwise sum; the result is only as precise as the less precise input."""
    if p.ring is not r.ring and p.ring != r.ring:
        raise ConfigurationError("coefficients live in different rings (params/window)")
    if r.is_exact_zero():
        return p
    if p.is_exact_zero():
        return r
    cap = _min_vec(p.cap, r.cap)
    # stored terms are always below their own cap: start from an operand whose
    # cap already equals the result's and filter only the other one
    if r.cap == cap and p.cap != cap:
        p, r = r, p
    if p.cap == cap:
        terms = dict(p.terms)
    else:
        terms = {e: v for e, v in p.terms.items() if _below(e, cap)}
    check = r.cap != cap
    for e, v in r.terms.items():
        if check and not _below(e, cap):
            continue
        s = terms.get(e, 0) + v
        if s:
            terms[e] = s
        elif e in terms:
            del terms[e]
    return LaurentCoeff(p.ring, terms, cap, _min_vec(p.tlo, r.tlo), p.clipped or r.clipped)


class CoeffAccumulator:
    """Mutable running sum of coefficients (used by long summations)."""

    __slots__ = ("ring", "terms", "cap", "tlo", "clipped")

    def __init__(self, c: LaurentCoeff):
        self.ring = c.ring
        self.terms = dict(c.terms)
        self.cap = c.cap
        self.tlo = c.tlo
        self.clipped = c.clipped

    def add(self, c: LaurentCoeff):
        cap = _min_vec(self.cap, c.cap)
        terms = self.terms
        if cap != self.cap:
            self.terms = terms = {e: v for e, v in terms.items() if _below(e, cap)}
            self.cap = cap
        check = c.cap != cap
        for e, v in c.terms.items():
            if check and not _below(e, cap):
                continue
            s = terms.get(e, 0) + v
            if s:
                terms[e] = s
            elif e in terms:
                del terms[e]
        self.tlo = _min_vec(self.tlo, c.tlo)
        self.clipped = self.clipped or c.clipped

    def value(self) -> LaurentCoeff:
        return LaurentCoeff(self.ring, self.terms, self.cap, self.tlo, self.clipped)


def coeff_mul(p: LaurentCoeff, r: LaurentCoeff) -> LaurentCoeff:
    """Convolution product clipped to the window, with precision tracking."""
    if p.ring is not r.ring and p.ring != r.ring:
        raise ConfigurationError("coefficients live in different rings (params/window)")
    ring = p.ring
    k = ring.nparams
    if p.is_exact_zero() or r.is_exact_zero():
        return ring.zero()
    if len(p.terms) == 1 and p.exact:
        (e, v), = p.terms.items()
        return r.mul_monomial(e, v)
    if len(r.terms) == 1 and r.exact:
        (e, v), = r.terms.items()
        return p.mul_monomial(e, v)
    wcap = ring._cap
    cap = [INF] * k
    pe, re_ = p.exact, r.exact
    if not pe:
        rl = _relevant_lo(r.terms, wcap, p.tlo, k)
        cap = [min(c, a + b) for c, a, b in zip(cap, p.cap, rl)]
    if not re_:
        pl = _relevant_lo(p.terms, wcap, r.tlo, k)
        cap = [min(c, a + b) for c, a, b in zip(cap, r.cap, pl)]
    if not pe and not re_:
        cap = [min(c, a + b, d + f) for c, a, b, d, f in zip(cap, p.cap, r.tlo, r.cap, p.tlo)]
    limit = [min(c, w) for c, w in zip(cap, wcap)]
    small, big = (p.terms, r.terms) if len(p.terms) <= len(r.terms) else (r.terms, p.terms)
    terms: dict = {}
    get = terms.get
    dropped = False
    for e1, c1 in small.items():
        for e2, c2 in big.items():
            n = tuple(map(_add, e1, e2))
            for x, l in zip(n, limit):
                if x >= l:
                    dropped = True
                    break
            else:
                terms[n] = get(n, 0) + c1 * c2
    terms = {e: v for e, v in terms.items() if v}
    if dropped:
        cap = [min(c, w) for c, w in zip(cap, wcap)]
    tlo = tuple(a + b for a, b in zip(p.tlo, r.tlo))
    return LaurentCoeff(ring, terms, cap, tlo, p.clipped or r.clipped or dropped)


def coeff_invert(p: LaurentCoeff) -> LaurentCoeff:
    """Inverse by geometric expansion of the non-constant part.

    Needs a nonzero, known constant term and every true term of ``p`` in the
    nonnegative (oriented) cone, so that the expansion converges in the window.
    """
    ring = p.ring
    z = ring.zero_exps
    c0 = p.terms.get(z, 0)
    if not c0 or not p.known_at(z):
        raise NotInvertible(f"constant term of {render_coeff(p)} is zero")
    if any(t < 0 for t in p.tlo):
        raise NotInvertible(
            f"{render_coeff(p)} has terms of negative degree in a graded parameter; "
            "its inverse does not exist in the windowed ring")
    inv0 = rdiv(1, c0)
    v = {e: -c * inv0 for e, c in p.terms.items() if e != z}
    if not v:
        return LaurentCoeff(ring, {z: inv0}, p.cap, (0,) * ring.nparams, p.clipped)
    vc = LaurentCoeff(ring, v, p.cap, None, p.clipped)
    acc = ring.one()
    power = ring.one()
    while True:
        power = power * vc
        if not power.terms:
            acc = acc + power
            break
        acc = acc + power
    acc = acc.truncate_to(p.cap)
    clipped = acc.clipped or p.clipped
    out = acc.scale(inv0)
    return LaurentCoeff(ring, out.terms, out.cap, (0,) * ring.nparams, clipped)


def coeff_invert_monomial(p: LaurentCoeff) -> LaurentCoeff:
    """Inverse of an exact single-term value (always exists in the Laurent ring)."""
    if not p.is_monomial():
        raise NotInvertible(f"{render_coeff(p)} is not an exact monomial")
    (e, c), = p.terms.items()
    return p.ring.monomial(tuple(-x for x in e), rdiv(1, c))


def coeff_eval_point(p: LaurentCoeff, point: Mapping[str, object]):
    """Exact value of the stored Laurent polynomial at a rational point."""
    params = p.ring.params
    vals = []
    for name in params.names:
        if name not in point:
            raise EvaluationError(f"no value for parameter {name!r}")
        vals.append(Fraction(as_rational(point[name])))
    total = Fraction(0)
    for raw, c in p.items_raw():
        term = Fraction(c)
        for v, e in zip(vals, raw):
            if e < 0 and v == 0:
                raise EvaluationError("zero assigned to a parameter with a negative exponent")
            if e:
                term *= v ** e
        total += term
    return as_rational(total)


# --- rendering --------------------------------------------------------------

def render_monomial(names, raw) -> str:
    parts = []
    for n, e in zip(names, raw):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def render_terms(pieces) -> str:
    """Join (coefficient, monomial-string) pairs as a signed sum."""
    out = []
    for c, mono in pieces:
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


def render_coeff(p: LaurentCoeff) -> str:
    names = p.ring.params.names
    return render_terms((c, render_monomial(names, raw)) for raw, c in p.items_raw())
