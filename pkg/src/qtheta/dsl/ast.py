"""AST for identity files.

Nodes are frozen dataclasses; ``span`` is excluded from equality so that
structurally equal trees compare equal regardless of layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int = 0
    end_col: int = 0

    def __str__(self):
        return f"line {self.line}, column {self.col}"


def _span():
    return field(default=None, compare=False, repr=False)


# --- integer expressions over summation indices ------------------------------

@dataclass(frozen=True)
class IntLit:
    value: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class IndexRef:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class IntNeg:
    operand: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class IntBin:
    op: str  # one of + - * /   ('/' is exact division)
    left: object
    right: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Binom:
    top: object
    k: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Guard:
    """``expr mod modulus == residue``"""
    expr: object
    modulus: int
    residue: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Bound:
    """``[val w1*v1 + ... >= expr]``; weights keyed by ``q`` or parameter names."""
    weights: tuple  # tuple of (name, int) in source order
    expr: object
    span: Optional[Span] = _span()


# --- series-valued expressions -----------------------------------------------

@dataclass(frozen=True)
class RationalLit:
    value: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ParamRef:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class VarRef:
    """The integration variable of an enclosing ``qint``."""
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class IndexValue:
    """A summation index used as a rational value."""
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class QPower:
    exp: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Pow:
    base: object
    exp: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Neg:
    operand: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: object
    right: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PochFinite:
    args: tuple
    base: int
    count: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PochInf:
    args: tuple
    base: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Phi:
    upper: tuple
    lower: tuple
    base: int
    z: object
    bound: Optional[Bound] = None
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class IndexDecl:
    name: str
    lower: object
    upper: object  # IntExpr, "inf" or "-inf"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Sum:
    indices: tuple
    bound: Bound
    guard: Optional[Guard]
    body: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BiSum:
    index: str
    bound: Bound
    body: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class QIntegral:
    var: str
    lower: object
    upper: object
    bound: Optional[Bound]
    body: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PartialTheta:
    arg: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BigQJacobi:
    n: object
    x: object
    a: object
    b: object
    c: object
    span: Optional[Span] = _span()


# --- declarations ------------------------------------------------------------

@dataclass(frozen=True)
class ParamDecl:
    name: str
    inverted: bool = False
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class IdentityDecl:
    name: str
    params: tuple
    lhs: object
    rhs: object
    meta: str = ""
    order: Optional[int] = None
    window: Optional[int] = None
    modes: str = "symbolic"
    span: Optional[Span] = _span()

    @property
    def param_names(self):
        return tuple(p.name for p in self.params)

    @property
    def inverted(self):
        return frozenset(p.name for p in self.params if p.inverted)


def children(node):
    """Direct AST children (for generic walks)."""
    out = []
    for name in getattr(node, "__dataclass_fields__", {}):
        if name == "span":
            continue
        v = getattr(node, name)
        if isinstance(v, tuple):
            out.extend(x for x in v if hasattr(x, "__dataclass_fields__"))
        elif hasattr(v, "__dataclass_fields__"):
            out.append(v)
    return out


def walk(node):
    yield node
    for c in children(node):
        yield from walk(c)
