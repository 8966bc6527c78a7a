"""Polynomial expression parser.

Grammar (whitespace is insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('+' | '-') factor | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | NAME | '(' expr ')'

Implicit multiplication ("x y", "2x") is rejected.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Tuple

from .poly import Polynomial, VariableContext


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}" + (f" in {text!r}" if text else ""))
        self.position = position


class UnknownVariable(ParseError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos or (m.group(0).strip() == ""):
            break
        num, name, op = m.groups()
        start = m.start(1) if num else m.start(2) if name else m.start(3)
        if num is not None:
            tokens.append(("int", num, start))
        elif name is not None:
            tokens.append(("name", name, start))
        else:
            if op not in "+-*^/()":
                raise ParseError(f"unexpected character {op!r}", start, text)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: VariableContext):
        self.text = text
        self.ctx = ctx
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], self.text)

    def parse(self) -> Polynomial:
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("name", "int") or tok[1] == "(":
                raise self.error("implicit multiplication is not allowed", tok)
            raise self.error(f"unexpected {tok[1]!r}", tok)
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            p = self.factor()
            return -p if tok[1] == "-" else p
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                raise self.error("exponent must be a non-negative integer literal", tok)
            return base ** int(tok[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            num = int(val)
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "int":
                    raise self.error("rational literal needs an integer denominator", den)
                if int(den[1]) == 0:
                    raise self.error("zero denominator", den)
                return Polynomial.constant(self.ctx, Fraction(num, int(den[1])))
            return Polynomial.constant(self.ctx, num)
        if kind == "name":
            if val not in self.ctx.names:
                raise UnknownVariable(f"unknown variable {val!r}", pos, self.text)
            return Polynomial.var(self.ctx, val)
        if kind == "op" and val == "(":
            p = self.expr()
            close = self.take()
            if close[1] != ")":
                raise self.error("expected ')'", close)
            return p
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {val!r}", tok)


def parse_polynomial(text: str, ctx: VariableContext) -> Polynomial:
    return _Parser(text, ctx).parse()
