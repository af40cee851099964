"""Recursive-descent parser for identity files.

Scoping is checked while parsing: integer expressions may only mention
summation indices that are in scope, and value expressions may only mention
declared parameters, enclosing indices or the ``qint`` variable.
"""

from __future__ import annotations

from ..errors import QThetaError
from . import ast as A
from .lexer import Token, tokenize


class ParseError(QThetaError):
    def __init__(self, expected: str, found: str, span=None):
        self.expected = expected
        self.found = found
        super().__init__(f"expected {expected}, found {found}", span)


class UnboundIndex(ParseError):
    def __init__(self, name, span=None):
        QThetaError.__init__(self, f"index '{name}' is not bound here", span)
        self.expected, self.found = "a bound index", name


class UndeclaredParam(ParseError):
    def __init__(self, name, span=None):
        QThetaError.__init__(self, f"parameter '{name}' is not declared", span)
        self.expected, self.found = "a declared parameter", name


MODES = ("symbolic", "point", "both")


class _Scope:
    def __init__(self, params=(), indices=(), var=None):
        self.params = frozenset(params)
        self.indices = tuple(indices)
        self.var = var

    def with_indices(self, *names):
        return _Scope(self.params, self.indices + tuple(names), self.var)

    def with_var(self, name):
        return _Scope(self.params, self.indices, name)


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0
        self.braces = []  # spans of the currently open '{'
        last = self.toks[-1].span if self.toks else A.Span(1, 1)
        self.eof = Token("EOF", "", A.Span(last.end_line or last.line, last.end_col or last.col))

    # -- token helpers ---------------------------------------------------------
    def peek(self, k=0) -> Token:
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else self.eof

    def at(self, text, k=0):
        t = self.peek(k)
        return t.kind in ("PUNCT", "KEYWORD") and t.text == text

    def next(self) -> Token:
        t = self.peek()
        self.pos += 1
        return t

    def fail(self, expected):
        t = self.peek()
        if t.kind == "EOF" and self.braces:
            # running out of input inside braces: point at the brace left open
            raise ParseError(f"{expected} or a '}}' closing this brace", "end of input",
                             self.braces[-1])
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        raise ParseError(expected, found, t.span)

    def expect(self, text) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        t = self.next()
        if text == "{":
            self.braces.append(t.span)
        elif text == "}":
            self.braces.pop()
        return t

    def expect_kind(self, kind, what) -> Token:
        if self.peek().kind != kind:
            self.fail(what)
        return self.next()

    def int_literal(self) -> int:
        neg = False
        if self.at("-"):
            self.next()
            neg = True
        v = int(self.expect_kind("INT", "an integer").text)
        return -v if neg else v

    # -- declarations -----------------------------------------------------------
    def parse_file(self) -> list:
        decls = []
        while self.peek().kind != "EOF":
            decls.append(self.identity())
        return decls

    def identity(self) -> A.IdentityDecl:
        start = self.expect("identity").span
        name = self.expect_kind("STRING", "an identity name string").text
        self.expect("{")
        fields = {"meta": "", "order": None, "window": None, "modes": "symbolic"}
        params = None
        lhs = rhs = None
        while not self.at("}"):
            t = self.peek()
            if self.at("meta"):
                self.next()
                fields["meta"] = self.expect_kind("STRING", "a string").text
            elif self.at("order") or self.at("window"):
                self.next()
                v = int(self.expect_kind("INT", "an integer").text)
                fields[t.text] = v
            elif self.at("modes"):
                self.next()
                m = self.expect_kind("IDENT", "symbolic, point or both")
                if m.text not in MODES:
                    raise ParseError("symbolic, point or both", repr(m.text), m.span)
                fields["modes"] = m.text
            elif self.at("params"):
                self.next()
                params = self.param_list()
            elif self.at("lhs") or self.at("rhs"):
                self.next()
                if params is None:
                    raise ParseError("a params declaration before the sides", repr(t.text), t.span)
                self.expect("=")
                e = self.expr(_Scope(p.name for p in params))
                if t.text == "lhs":
                    lhs = e
                else:
                    rhs = e
            else:
                self.fail("an identity field")
            self.expect(";")
        end = self.expect("}")
        if lhs is None or rhs is None:
            raise ParseError("both lhs and rhs", "an incomplete identity", start)
        return A.IdentityDecl(name, tuple(params), lhs, rhs, fields["meta"], fields["order"],
                              fields["window"], fields["modes"],
                              span=A.Span(start.line, start.col, end.span.line, end.span.col))

    def param_list(self):
        out = []
        seen = set()
        if self.at(";"):
            return ()
        while True:
            t = self.peek()
            inverted = False
            if t.kind == "INT":
                if t.text != "1":
                    self.fail("a parameter name or 1/name")
                self.next()
                self.expect("/")
                inverted = True
            name = self.expect_kind("IDENT", "a parameter name")
            if name.text == "q":
                raise ParseError("a parameter name", "the reserved name 'q'", name.span)
            if name.text in seen:
                raise ParseError("a new parameter name", f"duplicate '{name.text}'", name.span)
            seen.add(name.text)
            out.append(A.ParamDecl(name.text, inverted, span=t.span))
            if not self.at(","):
                return tuple(out)
            self.next()

    # -- integer expressions ----------------------------------------------------
    def intexpr(self, scope):
        left = self.iterm(scope)
        while self.at("+") or self.at("-"):
            op = self.next()
            right = self.iterm(scope)
            left = A.IntBin(op.text, left, right, span=op.span)
        return left

    def iterm(self, scope):
        left = self.iunary(scope)
        while self.at("*") or self.at("/"):
            op = self.next()
            right = self.iunary(scope)
            left = A.IntBin(op.text, left, right, span=op.span)
        return left

    def iunary(self, scope):
        if self.at("-"):
            t = self.next()
            return A.IntNeg(self.iunary(scope), span=t.span)
        return self.iatom(scope)

    def iatom(self, scope):
        t = self.peek()
        if t.kind == "INT":
            self.next()
            return A.IntLit(int(t.text), span=t.span)
        if t.kind == "IDENT":
            self.next()
            if t.text not in scope.indices:
                raise UnboundIndex(t.text, t.span)
            return A.IndexRef(t.text, span=t.span)
        if self.at("("):
            self.next()
            e = self.intexpr(scope)
            self.expect(")")
            return e
        if self.at("binom"):
            self.next()
            self.expect("(")
            top = self.intexpr(scope)
            self.expect(",")
            k = self.intexpr(scope)
            self.expect(")")
            return A.Binom(top, k, span=t.span)
        self.fail("an integer expression")

    def exponent(self, scope):
        if self.at("-"):
            t = self.next()
            return A.IntNeg(self.exponent(scope), span=t.span)
        return self.iatom(scope)

    # -- value expressions ------------------------------------------------------
    def expr(self, scope):
        left = self.term(scope)
        while self.at("+") or self.at("-"):
            op = self.next()
            right = self.term(scope)
            left = A.BinOp(op.text, left, right, span=op.span)
        return left

    def term(self, scope):
        left = self.unary(scope)
        while self.at("*") or self.at("/"):
            op = self.next()
            right = self.unary(scope)
            left = A.BinOp(op.text, left, right, span=op.span)
        return left

    def unary(self, scope):
        if self.at("-"):
            t = self.next()
            return A.Neg(self.unary(scope), span=t.span)
        return self.power(scope)

    def power(self, scope):
        t = self.peek()
        if t.kind == "IDENT" and t.text == "q":
            self.next()
            if self.at("^"):
                self.next()
                return A.QPower(self.exponent(scope), span=t.span)
            return A.QPower(A.IntLit(1, span=t.span), span=t.span)
        base = self.atom(scope)
        if self.at("^"):
            hat = self.next()
            return A.Pow(base, self.exponent(scope), span=hat.span)
        return base

    def atom(self, scope):
        t = self.peek()
        if t.kind == "INT":
            self.next()
            return A.RationalLit(int(t.text), span=t.span)
        if t.kind == "IDENT":
            self.next()
            if t.text in scope.indices:
                return A.IndexValue(t.text, span=t.span)
            if t.text == scope.var:
                return A.VarRef(t.text, span=t.span)
            if t.text not in scope.params:
                raise UndeclaredParam(t.text, t.span)
            return A.ParamRef(t.text, span=t.span)
        if self.at("("):
            self.next()
            e = self.expr(scope)
            self.expect(")")
            return e
        kw = t.text if t.kind == "KEYWORD" else None
        handler = {
            "poch": self.poch, "pochinf": self.pochinf, "phi": self.phi, "sum": self.sum,
            "bisum": self.bisum, "qint": self.qint, "ptheta": self.ptheta, "bigqj": self.bigqj,
        }.get(kw)
        if handler is None:
            self.fail("an expression")
        self.next()
        return handler(scope, t.span)

    def expr_list(self, scope, allow_empty=False):
        if allow_empty and self.at(";"):
            return ()
        out = [self.expr(scope)]
        while self.at(","):
            self.next()
            out.append(self.expr(scope))
        return tuple(out)

    def base(self):
        t = self.expect_kind("INT", "a positive base exponent")
        v = int(t.text)
        if v < 1:
            raise ParseError("a positive base exponent", t.text, t.span)
        return v

    def poch(self, scope, span):
        self.expect("(")
        args = self.expr_list(scope)
        self.expect(";")
        m = self.base()
        self.expect(";")
        n = self.intexpr(scope)
        self.expect(")")
        return A.PochFinite(args, m, n, span=span)

    def pochinf(self, scope, span):
        self.expect("(")
        args = self.expr_list(scope)
        self.expect(";")
        m = self.base()
        self.expect(")")
        return A.PochInf(args, m, span=span)

    def phi(self, scope, span):
        self.expect("(")
        upper = self.expr_list(scope, allow_empty=True)
        self.expect(";")
        lower = self.expr_list(scope, allow_empty=True)
        self.expect(";")
        m = self.base()
        self.expect(";")
        z = self.expr(scope)
        self.expect(")")
        bound = self.bound(scope.with_indices("n")) if self.at("[") else None
        return A.Phi(upper, lower, m, z, bound, span=span)

    def bound(self, scope):
        start = self.expect("[")
        self.expect("val")
        weights = []
        sign = 1
        if self.at("-"):
            self.next()
            sign = -1
        while True:
            w = 1
            if self.peek().kind == "INT":
                w = int(self.next().text)
                self.expect("*")
            name = self.expect_kind("IDENT", "q or a parameter name")
            if name.text != "q" and name.text not in scope.params:
                raise UndeclaredParam(name.text, name.span)
            weights.append((name.text, sign * w))
            if self.at("+") or self.at("-"):
                sign = 1 if self.next().text == "+" else -1
                continue
            break
        self.expect(">=")
        e = self.intexpr(scope)
        self.expect("]")
        return A.Bound(tuple(weights), e, span=start.span)

    def index_decl(self, scope):
        name = self.expect_kind("IDENT", "an index name")
        if name.text == "q" or name.text in scope.params or name.text in scope.indices:
            raise ParseError("a fresh index name", repr(name.text), name.span)
        self.expect("=")
        lo = self.intexpr(scope)
        self.expect("..")
        if self.at("inf"):
            self.next()
            hi = "inf"
        elif self.at("-") and self.at("inf", 1):
            self.next()
            self.next()
            hi = "-inf"
        else:
            hi = self.intexpr(scope)
        return A.IndexDecl(name.text, lo, hi, span=name.span)

    def sum(self, scope, span):
        decls = []
        inner = scope
        while True:
            d = self.index_decl(inner)
            decls.append(d)
            inner = inner.with_indices(d.name)
            if not self.at(","):
                break
            self.next()
        bound = self.bound(inner)
        guard = None
        if self.at("if"):
            g = self.next()
            e = self.intexpr(inner)
            self.expect("mod")
            mod = self.int_literal()
            if mod < 1:
                raise ParseError("a positive modulus", str(mod), g.span)
            self.expect("==")
            res = self.int_literal()
            guard = A.Guard(e, mod, res, span=g.span)
        self.expect("{")
        body = self.expr(inner)
        self.expect("}")
        return A.Sum(tuple(decls), bound, guard, body, span=span)

    def bisum(self, scope, span):
        name = self.expect_kind("IDENT", "an index name")
        if name.text == "q" or name.text in scope.params or name.text in scope.indices:
            raise ParseError("a fresh index name", repr(name.text), name.span)
        inner = scope.with_indices(name.text)
        bound = self.bound(inner)
        self.expect("{")
        body = self.expr(inner)
        self.expect("}")
        return A.BiSum(name.text, bound, body, span=span)

    def qint(self, scope, span):
        var = self.expect_kind("IDENT", "an integration variable")
        if var.text == "q" or var.text in scope.params or var.text in scope.indices:
            raise ParseError("a fresh variable name", repr(var.text), var.span)
        self.expect("=")
        lo = self.expr(scope)
        self.expect("..")
        hi = self.expr(scope)
        bound = self.bound(scope.with_indices("n")) if self.at("[") else None
        self.expect("{")
        body = self.expr(scope.with_var(var.text))
        self.expect("}")
        return A.QIntegral(var.text, lo, hi, bound, body, span=span)

    def ptheta(self, scope, span):
        self.expect("(")
        x = self.expr(scope)
        self.expect(")")
        return A.PartialTheta(x, span=span)

    def bigqj(self, scope, span):
        self.expect("(")
        n = self.intexpr(scope)
        parts = []
        for _ in range(4):
            self.expect(";")
            parts.append(self.expr(scope))
        self.expect(")")
        return A.BigQJacobi(n, *parts, span=span)


def parse(text: str) -> list:
    """Parse a file into a list of ``IdentityDecl``."""
    return Parser(text).parse_file()


def parse_expr(text: str, params=(), indices=()):
    """Parse a single value expression (handy for tests and the REPL)."""
    p = Parser(text)
    e = p.expr(_Scope(params, indices))
    if p.peek().kind != "EOF":
        p.fail("end of input")
    return e
