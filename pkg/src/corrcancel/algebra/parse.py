"""Polynomial text grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*          # '/' only by nonzero constants
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ('-'? INT | '(' '-'? INT ')'))?
    atom   := NUMBER | IDENT | '(' expr ')'

Identifiers must belong to the supplied variable list.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from ..errors import ScenarioError, UnknownIdentifier
from .field import FieldSpec
from .polynomial import Polynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")

MAX_EXPONENT = 256


class _Parser:
    def __init__(self, text, field, variables, line, column):
        self.text = text
        self.field = field
        self.variables = tuple(variables)
        self.line = line
        self.column = column
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            if m.group(1) is not None:
                self.tokens.append(("num", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("id", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                self.tokens.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def error(self, message, offset=None, cls=ScenarioError):
        if offset is None:
            offset = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        if self.line:
            raise cls(message, self.line, self.column + offset)
        raise cls(f"{message} (at offset {offset} in {self.text!r})")

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, off = self.take()
        if val != value:
            self.error(f"expected {value!r}", off)

    def parse(self) -> Polynomial:
        if not self.tokens:
            self.error("empty polynomial", 0)
        p = self.expr()
        if self.i != len(self.tokens):
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op, _ = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, off = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    self.error("division only by nonzero constants", off)
                p = p * self.field.inv(q.constant_value())
        return p

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] != "^":
            return base
        self.take()
        paren = self.peek()[1] == "("
        if paren:
            self.take()
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, val, off = self.take()
        if kind != "num":
            self.error("expected integer exponent", off)
        e = sign * int(val)
        if abs(e) > MAX_EXPONENT:
            self.error(f"exponent {e} exceeds limit {MAX_EXPONENT}", off)
        if paren:
            self.expect(")")
        if e < 0 and not base.is_monomial():
            self.error("negative exponent on a non-monomial", off)
        return base ** e

    def atom(self):
        kind, val, off = self.take()
        if kind == "num":
            return Polynomial.constant(self.field, self.variables, Fraction(int(val)))
        if kind == "id":
            if val not in self.variables:
                self.error(f"unknown variable {val!r}", off, UnknownIdentifier)
            return Polynomial.var(self.field, self.variables, val)
        if val == "(":
            p = self.expr()
            self.expect(")")
            return p
        self.error("unexpected end of input" if kind is None else f"unexpected {val!r}", off)


def parse_polynomial(text: str, field: FieldSpec, variables: Sequence[str], *, line: int = 0, column: int = 0) -> Polynomial:
    """Parse ``text`` into a :class:`Polynomial` in ``variables``.

    ``line``/``column`` locate the text inside a larger document for error messages.
    """
    return _Parser(text, field, variables, line, column).parse()
