"""Recursive-descent parser for the expression grammar.

::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("+" | "-") unary | power
    power   := atom ("^" unary)?          # right-associative
    atom    := NUMBER | "pi" | "e" | "i" | "z"
             | FUNC "(" expr ")" | "pow" "(" expr "," expr ")"
             | "polygamma" "(" INT "," expr ")" | "(" expr ")"

Numbers may carry an exponent (``1e-3``) and an imaginary suffix (``2.5i``).
The parser builds nodes without folding, except that a minus sign applied to
a bare literal becomes a negative constant and ``real +- imag`` literal pairs
become one complex constant, so printed constants read back unchanged.
"""

from __future__ import annotations

import math
import re

from .expr import FUNCTIONS, Add, Call, Const, Div, Expr, Mul, Neg, Polygamma, Pow, Sub, Var

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

_NAMED_CONSTANTS = {"pi": math.pi, "e": math.e, "i": 1j}


class ParseError(ValueError):
    """Syntax error or unknown identifier, with a 0-based character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        kind, val, pos = self.tok
        if val != value:
            shown = val or "end of input"
            raise ParseError(f"expected {value!r}, found {shown!r}", pos, self.text)
        return self.advance()

    def error(self, message: str):
        raise ParseError(message, self.tok[2], self.text)

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok[0] != "end":
            self.error(f"unexpected {self.tok[1]!r}")
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.tok[1] in ("+", "-"):
            op = self.advance()[1]
            right = self.term()
            left = _fold_complex_literal(left, right, op) or (
                Add(left, right) if op == "+" else Sub(left, right)
            )
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.tok[1] in ("*", "/"):
            op = self.advance()[1]
            right = self.unary()
            if op == "*":
                left = Mul(left, right)
            else:
                if isinstance(right, Const) and right.value == 0:
                    self.error("division by literal zero")
                left = Div(left, right)
        return left

    def unary(self) -> Expr:
        if self.tok[1] == "+":
            self.advance()
            return self.unary()
        if self.tok[1] == "-":
            self.advance()
            arg = self.unary()
            if isinstance(arg, Const):
                return Const(-arg.value)
            return Neg(arg)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok[1] == "^":
            self.advance()
            return Pow(base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, val, pos = self.tok
        if kind == "num":
            self.advance()
            if val.endswith("i"):
                return Const(complex(0, float(val[:-1])))
            return Const(float(val))
        if val == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            self.advance()
            if val == "z":
                return Var()
            if val in _NAMED_CONSTANTS:
                return Const(_NAMED_CONSTANTS[val])
            if val in FUNCTIONS or val in ("sqrt", "digamma", "pow", "polygamma"):
                return self.call(val, pos)
            raise ParseError(f"unknown identifier {val!r}", pos, self.text)
        self.error(f"unexpected {val or 'end of input'!r}")

    def call(self, name: str, pos: int) -> Expr:
        self.expect("(")
        if name == "pow":
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return Pow(a, b)
        if name == "polygamma":
            kind, val, npos = self.advance()
            if kind != "num" or not val.isdigit():
                raise ParseError("polygamma order must be a non-negative integer", npos, self.text)
            self.expect(",")
            arg = self.expr()
            self.expect(")")
            return Polygamma(int(val), arg)
        arg = self.expr()
        self.expect(")")
        if name == "sqrt":
            return Pow(arg, Const(0.5))
        if name == "digamma":
            return Polygamma(0, arg)
        return Call(name, arg)


def _fold_complex_literal(left: Expr, right: Expr, op: str):
    if not (isinstance(left, Const) and isinstance(right, Const)):
        return None
    a, b = left.value, right.value
    if a.imag == 0 and b.real == 0 and b.imag != 0:
        return Const(complex(a.real, b.imag if op == "+" else -b.imag))
    return None


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree; raises :class:`ParseError`."""
    return _Parser(text).parse()
