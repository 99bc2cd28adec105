"""Precedence-climbing parser for univariate polynomial expressions.

Accepted syntax: decimal literals (``2``, ``-0.25``, ``1e-3``), a single
variable name, the binary operators ``+ - * / ^`` and parentheses.  A literal
directly followed by the variable or a parenthesis multiplies implicitly
(``3x^2``).  Division is only allowed by a nonzero constant, and exponents must
be nonnegative integers no larger than :data:`MAX_EXPONENT`.  Literals are read
exactly, so the result is always a rational polynomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .poly import RATIONAL, Polynomial

MAX_EXPONENT = 64

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

# operator -> (precedence, right associative)
_BINARY = {"+": (1, False), "-": (1, False), "*": (2, False), "/": (2, False), "^": (4, True)}
_UNARY_PREC = 3


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    text = text.replace("−", "-").replace("**", "^")
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.var: str | None = None

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if self.peek().kind == "end":
            raise ParseError("empty expression", 0)
        value, _ = self.expr(1)
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.pos)
        return value

    def expr(self, min_prec: int) -> tuple[Polynomial, bool]:
        lhs, literal = self.unary()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in _BINARY:
                op = tok.text
            elif literal and (tok.kind == "name" or tok.text == "("):
                op = None  # implicit multiplication
            else:
                break
            prec, right = _BINARY[op or "*"]
            if prec < min_prec:
                break
            if op is not None:
                self.take()
            rhs, _ = self.expr(prec if right else prec + 1)
            lhs = self.apply(op or "*", lhs, rhs, tok.pos)
            literal = False
        return lhs, literal

    def unary(self) -> tuple[Polynomial, bool]:
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.take()
            operand, literal = self.expr(_UNARY_PREC)
            return (-operand if tok.text == "-" else operand), literal
        return self.primary()

    def primary(self) -> tuple[Polynomial, bool]:
        tok = self.take()
        if tok.kind == "num":
            return Polynomial([Fraction(tok.text)], RATIONAL), True
        if tok.kind == "name":
            if self.var is None:
                self.var = tok.text
            elif tok.text != self.var:
                raise ParseError(
                    f"more than one variable ({self.var!r} and {tok.text!r})", tok.pos
                )
            return Polynomial.x(RATIONAL), False
        if tok.text == "(":
            inner, _ = self.expr(1)
            close = self.take()
            if close.text != ")":
                raise ParseError("expected ')'", close.pos)
            return inner, False
        if tok.kind == "end":
            raise ParseError("unexpected end of input", tok.pos)
        raise ParseError(f"unexpected {tok.text!r}", tok.pos)

    @staticmethod
    def apply(op: str, a: Polynomial, b: Polynomial, pos: int) -> Polynomial:
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b.degree != 0:
                raise ParseError("division only by a nonzero constant", pos)
            return a.scale(1 / b.coeffs[0])
        # exponentiation
        if b.degree > 0:
            raise ParseError("exponent must be a constant", pos)
        e = b.coeffs[0]
        if e.denominator != 1 or e < 0:
            raise ParseError("exponent must be a nonnegative integer", pos)
        if e > MAX_EXPONENT:
            raise ParseError(f"exponent exceeds {MAX_EXPONENT}", pos)
        return a ** int(e)


def parse(text: str) -> Polynomial:
    """Parse ``text`` into an expanded rational :class:`Polynomial`."""
    return _Parser(text).parse()
