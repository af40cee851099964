"""Canonical pretty-printer; ``parse(pretty(d)) == d`` for every parsed ``d``."""

from __future__ import annotations

from . import ast as A

_INT_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _paren(s, prec, need):
    return f"({s})" if prec < need else s


def pretty_int(e, need=0) -> str:
    if isinstance(e, A.IntLit):
        if e.value < 0:
            raise ValueError("negative integer literals are written with unary minus")
        return str(e.value)
    if isinstance(e, A.IndexRef):
        return e.name
    if isinstance(e, A.Binom):
        return f"binom({pretty_int(e.top)}, {pretty_int(e.k)})"
    if isinstance(e, A.IntNeg):
        return _paren("-" + pretty_int(e.operand, 3), 3, need)
    if isinstance(e, A.IntBin):
        p = _INT_PREC[e.op]
        s = f"{pretty_int(e.left, p)} {e.op} {pretty_int(e.right, p + 1)}" if p == 1 else \
            f"{pretty_int(e.left, p)}{e.op}{pretty_int(e.right, p + 1)}"
        return _paren(s, p, need)
    raise TypeError(f"not an integer expression: {e!r}")


def _exp(e) -> str:
    return pretty_int(e, 4)


def _bound(b: A.Bound) -> str:
    parts = []
    for i, (name, w) in enumerate(b.weights):
        mag = abs(w)
        t = name if mag == 1 else f"{mag}*{name}"
        if i == 0:
            parts.append(("-" if w < 0 else "") + t)
        else:
            parts.append(("- " if w < 0 else "+ ") + t)
    return f"[val {' '.join(parts)} >= {pretty_int(b.expr)}]"


def _list(xs) -> str:
    return ", ".join(pretty(x) for x in xs)


def pretty(e, need=0) -> str:
    if isinstance(e, A.RationalLit):
        return str(e.value)
    if isinstance(e, (A.ParamRef, A.VarRef, A.IndexValue)):
        return e.name
    if isinstance(e, A.QPower):
        if e.exp == A.IntLit(1):
            return "q"
        return _paren("q^" + _exp(e.exp), 4, need)
    if isinstance(e, A.Pow):
        base = f"({pretty(e.base)})" if isinstance(e.base, A.QPower) else pretty(e.base, 5)
        return _paren(f"{base}^{_exp(e.exp)}", 4, need)
    if isinstance(e, A.Neg):
        return _paren("-" + pretty(e.operand, 3), 3, need)
    if isinstance(e, A.BinOp):
        p = _INT_PREC[e.op]
        if p == 1:
            s = f"{pretty(e.left, 1)} {e.op} {pretty(e.right, 2)}"
        else:
            s = f"{pretty(e.left, 2)}{e.op}{pretty(e.right, 3)}"
        return _paren(s, p, need)
    if isinstance(e, A.PochFinite):
        return f"poch({_list(e.args)}; {e.base}; {pretty_int(e.count)})"
    if isinstance(e, A.PochInf):
        return f"pochinf({_list(e.args)}; {e.base})"
    if isinstance(e, A.Phi):
        s = f"phi({_list(e.upper)}; {_list(e.lower)}; {e.base}; {pretty(e.z)})"
        return s + (" " + _bound(e.bound) if e.bound is not None else "")
    if isinstance(e, A.Sum):
        decls = []
        for d in e.indices:
            hi = d.upper if isinstance(d.upper, str) else pretty_int(d.upper)
            decls.append(f"{d.name} = {pretty_int(d.lower)}..{hi}")
        s = f"sum {', '.join(decls)} {_bound(e.bound)}"
        if e.guard is not None:
            g = e.guard
            res = str(g.residue) if g.residue >= 0 else f"-{-g.residue}"
            s += f" if {pretty_int(g.expr)} mod {g.modulus} == {res}"
        return s + f" {{ {pretty(e.body)} }}"
    if isinstance(e, A.BiSum):
        return f"bisum {e.index} {_bound(e.bound)} {{ {pretty(e.body)} }}"
    if isinstance(e, A.QIntegral):
        s = f"qint {e.var} = {pretty(e.lower)}..{pretty(e.upper)}"
        if e.bound is not None:
            s += " " + _bound(e.bound)
        return s + f" {{ {pretty(e.body)} }}"
    if isinstance(e, A.PartialTheta):
        return f"ptheta({pretty(e.arg)})"
    if isinstance(e, A.BigQJacobi):
        parts = "; ".join(pretty(x) for x in (e.x, e.a, e.b, e.c))
        return f"bigqj({pretty_int(e.n)}; {parts})"
    raise TypeError(f"not an expression: {e!r}")


def pretty_decl(d: A.IdentityDecl) -> str:
    lines = [f'identity "{d.name}" {{']
    if d.meta:
        lines.append(f'  meta "{d.meta}";')
    if d.order is not None:
        lines.append(f"  order {d.order};")
    if d.window is not None:
        lines.append(f"  window {d.window};")
    lines.append(f"  modes {d.modes};")
    params = ", ".join(("1/" if p.inverted else "") + p.name for p in d.params)
    lines.append(f"  params {params};")
    lines.append(f"  lhs = {pretty(d.lhs)};")
    lines.append(f"  rhs = {pretty(d.rhs)};")
    lines.append("}")
    return "\n".join(lines)


def pretty_file(decls) -> str:
    return "\n\n".join(pretty_decl(d) for d in decls) + "\n"
