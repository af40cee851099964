"""Single-site mutations of a right-hand side, used to test that the harness
actually detects wrong identities.

Two kinds are generated: ``sign`` (swap one ``+``/``-``, drop one unary
minus or negate the summand of one sum) and ``exp`` (add 1 to one exponent of ``q`` or of a power).
Termination annotations, index ranges and Pochhammer lengths are left alone.
"""

from __future__ import annotations

from dataclasses import fields, replace

from ..dsl import ast as A

_SKIP = {"bound", "indices", "count", "guard"}


def _even_power(node):
    return isinstance(node, A.Pow) and isinstance(node.exp, A.IntLit) and node.exp.value % 2 == 0


def _sites(node, under_even=False):
    """Yield (kind, path) for every mutation site below ``node``.

    Negating the base of an even power changes nothing, so those negations
    are not offered (they would be equivalent mutants).
    """
    if isinstance(node, A.BinOp) and node.op in "+-":
        yield "sign", ()
    if isinstance(node, (A.Neg, A.Sum, A.BiSum)) and not under_even:
        yield "sign", ()
    if isinstance(node, (A.QPower, A.Pow)):
        yield "exp", ()
    for f in fields(node):
        if f.name == "span" or f.name in _SKIP:
            continue
        v = getattr(node, f.name)
        if isinstance(v, tuple):
            for i, x in enumerate(v):
                if _is_expr(x):
                    for kind, path in _sites(x):
                        yield kind, ((f.name, i),) + path
        elif _is_expr(v):
            even = f.name == "base" and _even_power(node)
            for kind, path in _sites(v, even):
                yield kind, ((f.name, None),) + path


def _is_expr(x):
    return hasattr(x, "__dataclass_fields__") and not isinstance(
        x, (A.IntLit, A.IndexRef, A.IntNeg, A.IntBin, A.Binom, A.Bound, A.Guard, A.IndexDecl))


def _apply(node, kind, path):
    if not path:
        if kind == "sign":
            if isinstance(node, A.Neg):
                return node.operand
            if isinstance(node, (A.Sum, A.BiSum)):
                return replace(node, body=A.Neg(node.body))
            return replace(node, op="-" if node.op == "+" else "+")
        return replace(node, exp=A.IntBin("+", node.exp, A.IntLit(1)))
    (name, i), rest = path[0], path[1:]
    v = getattr(node, name)
    if i is None:
        return replace(node, **{name: _apply(v, kind, rest)})
    items = list(v)
    items[i] = _apply(items[i], kind, rest)
    return replace(node, **{name: tuple(items)})


def mutations(decl: A.IdentityDecl):
    """Yield ``(kind, mutated_decl)`` for every single-site mutation of the RHS."""
    for k, (kind, path) in enumerate(_sites(decl.rhs)):
        rhs = _apply(decl.rhs, kind, path)
        yield kind, replace(decl, name=f"{decl.name}-mutated-{k}", rhs=rhs)
