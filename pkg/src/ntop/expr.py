"""Arithmetic expressions over rational literals, lowered to sigma_R point streams.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := rational | 'neg(' expr ')' | 'min(' expr ',' expr ')'
            | 'max(' expr ',' expr ')' | '(' expr ')'

A rational literal is ``123``, ``1.25`` or ``p/q``; there is no division
operator, so ``1/2`` always reads as one literal.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import arithmetic as ar
from .core import Point
from .spaces import fmt_q, from_rational


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Expr:
    op: str  # "lit", "neg", "add", "mul", "min", "max"
    args: tuple = ()
    value: Optional[Fraction] = None

    def __str__(self):
        if self.op == "lit":
            return fmt_q(self.value)
        return f"{self.op}({', '.join(map(str, self.args))})"


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?(?:/\d+)?)|(neg|min|max)\s*\(|([-+*(),]))")


def _tokens(text: str) -> list:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected input at column {pos + 1}: {text[pos:pos + 10]!r}")
        num, fn, sym = m.groups()
        if num is not None:
            try:
                out.append(("num", Fraction(num)))
            except ZeroDivisionError:
                raise ParseError(f"zero denominator in {num!r}") from None
        elif fn is not None:
            out.append(("fn", fn))
        else:
            out.append(("sym", sym))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", None)

    def take(self, sym=None):
        tok = self.peek()
        if sym is not None and tok != ("sym", sym):
            found = "end of input" if tok[0] == "end" else repr(str(tok[1]))
            raise ParseError(f"expected {sym!r}, found {found}")
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            _, sym = self.take()
            rhs = self.term()
            node = Expr("add", (node, rhs if sym == "+" else Expr("neg", (rhs,))))
        return node

    def term(self):
        node = self.factor()
        while self.peek() == ("sym", "*"):
            self.take()
            node = Expr("mul", (node, self.factor()))
        return node

    def factor(self):
        kind, val = self.take()
        if kind == "num":
            return Expr("lit", value=val)
        if kind == "fn":
            first = self.expr()
            if val == "neg":
                self.take(")")
                return Expr("neg", (first,))
            self.take(",")
            second = self.expr()
            self.take(")")
            return Expr(val, (first, second))
        if (kind, val) == ("sym", "("):
            node = self.expr()
            self.take(")")
            return node
        raise ParseError("unexpected end of input" if kind == "end" else f"unexpected {val!r}")


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    node = p.expr()
    if p.peek()[0] != "end":
        raise ParseError(f"trailing input starting at {str(p.peek()[1])!r}")
    return node


def to_point(e: Expr, fuel: Optional[int] = None) -> Point:
    if e.op == "lit":
        return from_rational(e.value)
    args = [to_point(a, fuel) for a in e.args]
    if e.op == "neg":
        return ar.negate(args[0], fuel)
    ops = {"add": ar.add, "mul": ar.mul, "min": ar.minimum, "max": ar.maximum}
    return ops[e.op](*args, fuel=fuel)
