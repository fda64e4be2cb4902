"""Recursive-descent parser for the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' uint)?
    base   := rational | name | '(' expr ')'

A literal is an optionally signed integer; ``a/b`` literals are read as the
integer division they denote, which keeps ``/`` left-associative.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .errors import DivisionByZeroError, ParseError, UnknownVariableError
from .ratexpr import RatExpr

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.names = tuple(names)
        self.known = set(self.names)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.take()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}, found {value or 'end of input'!r}", pos, self.text)

    def parse(self) -> RatExpr:
        result = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", pos, self.text)
        return result.with_vars(self.names)

    def expr(self) -> RatExpr:
        acc = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if value == "+" else acc - rhs
            else:
                return acc

    def term(self) -> RatExpr:
        acc = self.factor()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value in "*/":
                self.take()
                rhs = self.factor()
                if value == "*":
                    acc = acc * rhs
                else:
                    if rhs.is_zero():
                        raise DivisionByZeroError(f"division by the zero polynomial at position {pos}")
                    acc = acc / rhs
            else:
                return acc

    def factor(self) -> RatExpr:
        base = self.base()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.take()
            kind, value, pos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer", pos, self.text)
            return base ** int(value)
        return base

    def base(self) -> RatExpr:
        kind, value, pos = self.take()
        if kind == "int":
            return RatExpr.const(int(value))
        if kind == "op" and value in "+-":
            nkind, nvalue, npos = self.take()
            if nkind != "int" or npos != pos + 1:
                raise ParseError("a sign must be followed directly by digits", pos, self.text)
            n = Fraction(int(nvalue))
            return RatExpr.const(-n if value == "-" else n)
        if kind == "name":
            if value not in self.known:
                raise UnknownVariableError(value, pos)
            return RatExpr.var(value, self.names)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos, self.text)


def parse(text: str, names: Sequence[str]) -> RatExpr:
    """Parse ``text`` over the variables ``names`` into canonical form."""
    return _Parser(text, names).parse()
