"""Tokenizer for identity files."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import QThetaError
from .ast import Span

KEYWORDS = frozenset("""
identity params lhs rhs sum bisum if val poch pochinf phi qint ptheta bigqj binom
mod inf meta order window modes
""".split())

# longest first
PUNCT = ("..", "==", ">=", "{", "}", "(", ")", "[", "]", ";", ",", "=", "+", "-", "*",
         "/", "^")


class LexError(QThetaError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, INT, STRING, KEYWORD, PUNCT, EOF
    text: str
    span: Span

    def __repr__(self):
        return f"{self.kind}({self.text!r})"


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start = (line, col)
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            kind, val = "INT", text[i:j]
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            val = text[i:j]
            kind = "KEYWORD" if val in KEYWORDS else "IDENT"
        elif ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise LexError("unterminated string").with_span(Span(*start))
                j += 1
            if j >= n:
                raise LexError("unterminated string").with_span(Span(*start))
            j += 1
            kind, val = "STRING", text[i + 1:j - 1]
        else:
            for p in PUNCT:
                if text.startswith(p, i):
                    kind, val, j = "PUNCT", p, i + len(p)
                    break
            else:
                raise LexError(f"unexpected character {ch!r}").with_span(Span(*start))
        width = j - i
        toks.append(Token(kind, val, Span(line, col, line, col + width)))
        col += width
        i = j
    return toks
