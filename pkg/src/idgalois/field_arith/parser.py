"""Recursive-descent parser for rational expressions.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := INT | VAR | "a" | "(" expr ")"

``a`` is the generator of GF(p^m) and is only accepted when m > 1.
"""
from __future__ import annotations

import re

from .gf import FiniteField, GF
from .ratfunc import RatFunc

MAX_EXPONENT = 10_000
MAX_DEGREE = 1_000_000


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int | None = None, text: str = ""):
        self.pos = pos
        self.text = text
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{msg}{where}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))?")


def _tokenize(text: str):
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        mt = _TOKEN.match(text, pos)
        if mt.end() == pos:  # pragma: no cover - \s* or \S always consumes
            break
        if mt.group(1) is not None:
            out.append(("int", mt.group(1), mt.start(1)))
        elif mt.group(2) is not None:
            out.append(("name", mt.group(2), mt.start(2)))
        elif mt.group(3) is not None:
            ch = mt.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", mt.start(3), text)
            out.append((ch, ch, mt.start(3)))
        pos = mt.end()
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str, field: FiniteField, var: str, symbols=None):
        self.symbols = symbols or {}
        self.text = text
        self.F = field
        self.var = var
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {want}, found {got}", tok[2], self.text)
        self.i += 1
        return tok

    def expr(self):
        acc = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.unary()
            if op == "*":
                acc = acc * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("zero denominator", pos, self.text)
                acc = acc / rhs
        return acc

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                raise ParseError("exponent must be a nonnegative integer literal", tok[2], self.text)
            self.take()
            e = int(tok[1])
            if e > MAX_EXPONENT:
                raise ParseError(f"exponent overflow ({e} > {MAX_EXPONENT})", tok[2], self.text)
            deg = max(len(base.num), len(base.den)) - 1
            if deg * e > MAX_DEGREE:
                raise ParseError("exponent overflow (degree too large)", tok[2], self.text)
            return base**e
        return base

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return RatFunc.from_int(self.F, int(val), self.var)
        if kind == "name":
            self.take()
            if val == self.var:
                return RatFunc.gen(self.F, self.var)
            if val in self.symbols:
                return self.symbols[val]
            if val == "a" and self.F.m > 1:
                return RatFunc.const(self.F, self.F.generator(), self.var)
            raise ParseError(f"unknown symbol {val!r}", pos, self.text)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        got = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {got}", pos, self.text)


def parse_expr(text: str, field: FiniteField, var: str = "t", symbols=None) -> RatFunc:
    """Parse ``text`` into a canonical :class:`RatFunc` in ``var``.

    ``symbols`` maps extra names to ready-made values (used to let ``t`` stand
    for s^m or s^p - s inside an extension).
    """
    if not isinstance(text, str):
        raise ParseError(f"expression must be a string, got {type(text).__name__}")
    ps = _Parser(text, field, var, symbols)
    if ps.peek()[0] == "end":
        raise ParseError("empty expression", 0, text)
    out = ps.expr()
    ps.take("end")
    return out


def parse_int_poly(text: str, p: int, var: str = "x") -> tuple:
    """Coefficients (low degree first) of a polynomial over GF(p) written in ``var``."""
    f = parse_expr(text, GF(p), var)
    if not f.is_poly():
        raise ParseError(f"{text!r} is not a polynomial")
    return f.num
