"""Parser for the ASCII expression grammar used everywhere expressions appear.

Grammar (no implicit multiplication):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

INT is a nonnegative integer literal, NAME matches [A-Za-z][A-Za-z0-9_]*.
Rationals are written a/b; '/' is accepted only when the divisor reduces to a
nonzero constant.  Exponents must be nonnegative integer literals.
"""

from __future__ import annotations

import re

from .fields import Field
from .poly import Polynomial


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        self.position = position
        self.text = text
        super().__init__(f"{message} at column {position + 1} in {text!r}")


_TOKEN = re.compile(r"\s*(?:(?P<int>[0-9]+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        for kind in ("int", "name", "op"):
            val = m.group(kind)
            if val is not None:
                tokens.append((kind, val, m.start(kind)))
                break
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, field: Field, variables: tuple[str, ...]):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.field = field
        self.vars = variables

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression", len(self.text), self.text)
        self.i += 1
        return tok

    def expect_op(self, op: str):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError(f"expected {op!r}", tok[2], self.text)

    def parse(self) -> Polynomial:
        p = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2], self.text)
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.take()
            q = self.term()
            p = p + q if tok[1] == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "*/":
            self.take()
            q = self.unary()
            if tok[1] == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise ParseError("division is only allowed by a nonzero constant", tok[2], self.text)
                p = p.scale(self.field.inv(q.constant_value()))
        return p

    def unary(self) -> Polynomial:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            p = self.unary()
            return p if tok[1] == "+" else -p
        return self.power()

    def power(self) -> Polynomial:
        p = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.take()
            etok = self.take()
            if etok[0] != "int":
                raise ParseError("exponent must be a nonnegative integer literal", etok[2], self.text)
            p = p ** int(etok[1])
        return p

    def atom(self) -> Polynomial:
        tok = self.take()
        if tok[0] == "int":
            return Polynomial.const(self.field, self.vars, int(tok[1]))
        if tok[0] == "name":
            if tok[1] not in self.vars:
                raise ParseError(f"unknown variable {tok[1]!r}", tok[2], self.text)
            return Polynomial.variable(self.field, self.vars, tok[1])
        if tok[1] == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2], self.text)


def poly_normalize(text: str, field: Field, variables: tuple[str, ...]) -> Polynomial:
    """Parse an expression into canonical expanded polynomial form."""
    return _Parser(text, field, variables).parse()
