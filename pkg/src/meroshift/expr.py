"""Expression trees in one complex variable ``z``.

Nodes are frozen dataclasses, so trees are hashable, comparable by
structure and safe to share.  Builders (:func:`add`, :func:`mul`, ...) fold
constants; nothing else is simplified.

``Pow`` with a non-integer exponent means ``exp(exponent * Log(base))`` with
the principal logarithm, so ``rho ** (z/c)`` always takes the principal
branch.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

FUNCTIONS = ("exp", "log", "sin", "cos", "tan", "gamma")

Number = Union[int, float, complex]


class Expr:
    """Base class; supports Python arithmetic operators for convenience."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __pow__(self, other):
        return power(self, as_expr(other))

    def __rpow__(self, other):
        return power(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True, slots=True)
class Var(Expr):
    pass


@dataclass(frozen=True, slots=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Div(Expr):
    left: Expr
    right: Expr

    def __post_init__(self):
        if isinstance(self.right, Const) and self.right.value == 0:
            raise ZeroDivisionError("division by the literal constant 0")


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True, slots=True)
class Call(Expr):
    """One of :data:`FUNCTIONS` applied to ``arg``."""

    fn: str
    arg: Expr

    def __post_init__(self):
        if self.fn not in FUNCTIONS:
            raise ValueError(f"unknown function {self.fn!r}")


@dataclass(frozen=True, slots=True)
class Polygamma(Expr):
    """psi^(order)(arg); order 0 is the digamma function."""

    order: int
    arg: Expr


Z = Var()
ZERO = Const(0)
ONE = Const(1)


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float, complex)):
        return Const(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Expr")


def const_value(e: Expr) -> complex | None:
    return e.value if isinstance(e, Const) else None


def integer_value(e: Expr) -> int | None:
    """The exponent as a Python int when ``e`` is a real integral constant."""
    if isinstance(e, Const) and e.value.imag == 0 and float(e.value.real).is_integer():
        return int(e.value.real)
    return None


# ----------------------------------------------------------------------------
# builders with constant folding


def add(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if ca is not None and cb is not None:
        return Const(ca + cb)
    if ca == 0:
        return b
    if cb == 0:
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if ca is not None and cb is not None:
        return Const(ca - cb)
    if cb == 0:
        return a
    if ca == 0:
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if ca is not None and cb is not None:
        return Const(ca * cb)
    if ca == 0 or cb == 0:
        return ZERO
    if ca == 1:
        return b
    if cb == 1:
        return a
    if ca == -1:
        return neg(b)
    if cb == -1:
        return neg(a)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if cb == 0:
        raise ZeroDivisionError("division by the literal constant 0")
    if ca is not None and cb is not None:
        return Const(ca / cb)
    if ca == 0:
        return ZERO
    if cb == 1:
        return a
    return Div(a, b)


def neg(a: Expr) -> Expr:
    ca = const_value(a)
    if ca is not None:
        return Const(-ca)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def power(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    n = integer_value(b)
    if n == 0:
        return ONE
    if n == 1:
        return a
    if ca is not None and cb is not None:
        if n is not None:
            if ca == 0 and n < 0:
                raise ZeroDivisionError("0 to a negative power")
            return Const(ca**n)
        if ca != 0:
            return Const(cmath.exp(cb * cmath.log(ca)))
    return Pow(a, b)


def call(fn: str, a: Expr) -> Expr:
    return Call(fn, a)


def exp(a) -> Expr:
    return Call("exp", as_expr(a))


def log(a) -> Expr:
    return Call("log", as_expr(a))


def sin(a) -> Expr:
    return Call("sin", as_expr(a))


def cos(a) -> Expr:
    return Call("cos", as_expr(a))


def tan(a) -> Expr:
    return Call("tan", as_expr(a))


def gamma(a) -> Expr:
    return Call("gamma", as_expr(a))


def digamma(a) -> Expr:
    return Polygamma(0, as_expr(a))


def principal_power(rho: complex, exponent: Expr) -> Expr:
    """``rho ** exponent`` on the principal branch, as ``exp(exponent * Log rho)``."""
    rho = complex(rho)
    if rho == 0:
        raise ValueError("0 ** z is undefined")
    return exp(mul(exponent, Const(cmath.log(rho))))


def subtract_constant(e: Expr, a: Number) -> Expr:
    """``e - a`` with the additive constant folded into a trailing ``+ const``.

    Keeps ``(b*exp(z) + a) - a`` from becoming a catastrophic cancellation.
    """
    a = complex(a)
    if a == 0:
        return e
    if isinstance(e, Add) and isinstance(e.right, Const):
        return add(e.left, Const(e.right.value - a))
    if isinstance(e, Add) and isinstance(e.left, Const):
        return add(Const(e.left.value - a), e.right)
    if isinstance(e, Sub) and isinstance(e.right, Const):
        return sub(e.left, Const(e.right.value + a))
    return sub(e, Const(a))


# ----------------------------------------------------------------------------
# structural transforms


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (Add, Sub, Mul, Div)):
        return (e.left, e.right)
    if isinstance(e, Pow):
        return (e.base, e.exponent)
    if isinstance(e, (Neg,)):
        return (e.arg,)
    if isinstance(e, (Call, Polygamma)):
        return (e.arg,)
    return ()


def substitute(e: Expr, replacement: Expr) -> Expr:
    """Replace every occurrence of ``z`` by ``replacement``."""
    if isinstance(e, Var):
        return replacement
    if isinstance(e, Const):
        return e
    if isinstance(e, Add):
        return add(substitute(e.left, replacement), substitute(e.right, replacement))
    if isinstance(e, Sub):
        return sub(substitute(e.left, replacement), substitute(e.right, replacement))
    if isinstance(e, Mul):
        return mul(substitute(e.left, replacement), substitute(e.right, replacement))
    if isinstance(e, Div):
        return div(substitute(e.left, replacement), substitute(e.right, replacement))
    if isinstance(e, Neg):
        return neg(substitute(e.arg, replacement))
    if isinstance(e, Pow):
        return power(substitute(e.base, replacement), substitute(e.exponent, replacement))
    if isinstance(e, Call):
        return Call(e.fn, substitute(e.arg, replacement))
    if isinstance(e, Polygamma):
        return Polygamma(e.order, substitute(e.arg, replacement))
    raise TypeError(type(e).__name__)


def shift(e: Expr, delta: Number) -> Expr:
    """The expression for ``e(z + delta)``."""
    delta = complex(delta)
    if delta == 0:
        return e
    return substitute(e, Add(Z, Const(delta)))


def derivative(e: Expr) -> Expr:
    """Symbolic d/dz."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Add):
        return add(derivative(e.left), derivative(e.right))
    if isinstance(e, Sub):
        return sub(derivative(e.left), derivative(e.right))
    if isinstance(e, Neg):
        return neg(derivative(e.arg))
    if isinstance(e, Mul):
        return add(mul(derivative(e.left), e.right), mul(e.left, derivative(e.right)))
    if isinstance(e, Div):
        num = sub(mul(derivative(e.left), e.right), mul(e.left, derivative(e.right)))
        return div(num, power(e.right, Const(2)))
    if isinstance(e, Pow):
        return _derivative_pow(e)
    if isinstance(e, Call):
        u, du = e.arg, derivative(e.arg)
        if e.fn == "exp":
            outer = e
        elif e.fn == "log":
            return div(du, u)
        elif e.fn == "sin":
            outer = cos(u)
        elif e.fn == "cos":
            outer = neg(sin(u))
        elif e.fn == "tan":
            outer = add(ONE, power(e, Const(2)))
        else:  # gamma
            outer = mul(e, digamma(u))
        return mul(outer, du)
    if isinstance(e, Polygamma):
        return mul(Polygamma(e.order + 1, e.arg), derivative(e.arg))
    raise TypeError(type(e).__name__)


def _derivative_pow(e: Pow) -> Expr:
    b, x = e.base, e.exponent
    db, dx = derivative(b), derivative(x)
    if isinstance(x, Const):
        n = integer_value(x)
        lower = power(b, Const(n - 1 if n is not None else x.value - 1))
        return mul(mul(x, lower), db)
    if isinstance(b, Const):
        return mul(mul(e, Const(cmath.log(b.value))), dx)
    # d/dz b^x = b^x (x' Log b + x b'/b)
    return mul(e, add(mul(dx, log(b)), div(mul(x, db), b)))


def nth_derivative(e: Expr, k: int) -> Expr:
    for _ in range(k):
        e = derivative(e)
    return e


def is_entire(e: Expr) -> bool:
    """Conservative structural test: True only if ``e`` is certainly entire."""
    if isinstance(e, (Const, Var)):
        return True
    if isinstance(e, (Add, Sub, Mul, Neg)):
        return all(is_entire(c) for c in children(e))
    if isinstance(e, Pow):
        n = integer_value(e.exponent)
        if n is not None and n >= 0:
            return is_entire(e.base)
        if isinstance(e.base, Const) and e.base.value != 0:
            return is_entire(e.exponent)
        return False
    if isinstance(e, Call):
        return e.fn in ("exp", "sin", "cos") and is_entire(e.arg)
    return False


def as_fraction(e: Expr) -> tuple[Expr, Expr] | None:
    """Write ``e`` as ``numerator / denominator`` with both parts entire.

    Returns ``None`` when the structure does not allow it (log, gamma,
    digamma, non-integer powers of non-constants, or transcendental functions
    of non-entire arguments).
    """
    if is_entire(e):
        return e, ONE
    if isinstance(e, (Add, Sub)):
        fa, fb = as_fraction(e.left), as_fraction(e.right)
        if fa is None or fb is None:
            return None
        (na, da), (nb, db) = fa, fb
        if da == db:
            comb = add(na, nb) if isinstance(e, Add) else sub(na, nb)
            return comb, da
        left, right = mul(na, db), mul(nb, da)
        comb = add(left, right) if isinstance(e, Add) else sub(left, right)
        return comb, mul(da, db)
    if isinstance(e, Mul):
        fa, fb = as_fraction(e.left), as_fraction(e.right)
        if fa is None or fb is None:
            return None
        return mul(fa[0], fb[0]), mul(fa[1], fb[1])
    if isinstance(e, Div):
        fa, fb = as_fraction(e.left), as_fraction(e.right)
        if fa is None or fb is None:
            return None
        return mul(fa[0], fb[1]), mul(fa[1], fb[0])
    if isinstance(e, Neg):
        fa = as_fraction(e.arg)
        return None if fa is None else (neg(fa[0]), fa[1])
    if isinstance(e, Pow):
        n = integer_value(e.exponent)
        fa = as_fraction(e.base)
        if n is None or fa is None:
            return None
        if n >= 0:
            return power(fa[0], Const(n)), power(fa[1], Const(n))
        return power(fa[1], Const(-n)), power(fa[0], Const(-n))
    if isinstance(e, Call) and e.fn == "tan" and is_entire(e.arg):
        return sin(e.arg), cos(e.arg)
    return None


# ----------------------------------------------------------------------------
# printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def format_number(x: float) -> str:
    r = repr(float(x))
    if r in ("inf", "-inf", "nan"):
        raise ValueError(f"cannot print non-finite constant {r}")
    return r


def _const_text(c: complex) -> tuple[str, int]:
    """Text and precedence for a constant."""
    re_, im = c.real, c.imag
    if im == 0:
        text = format_number(re_)
        return text, (5 if re_ >= 0 and not text.startswith("-") else 3)
    if re_ == 0:
        text = format_number(im) + "i"
        return text, (5 if im >= 0 and not text.startswith("-") else 3)
    sign = "-" if im < 0 or (im == 0 and math.copysign(1, im) < 0) else "+"
    return f"{format_number(re_)}{sign}{format_number(abs(im))}i", 1


def to_text(e: Expr) -> str:
    """Render in the parser's grammar; ``parse(to_text(e)) == e`` structurally."""
    return _text(e)[0]


def _wrap(e: Expr, min_prec: int) -> str:
    text, prec = _text(e)
    return f"({text})" if prec < min_prec else text


def _text(e: Expr) -> tuple[str, int]:
    if isinstance(e, Const):
        return _const_text(e.value)
    if isinstance(e, Var):
        return "z", 5
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        return f"{_wrap(e.left, 1)} {op} {_wrap(e.right, 2)}", 1
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        return f"{_wrap(e.left, 2)}{op}{_wrap(e.right, 3)}", 2
    if isinstance(e, Neg):
        return f"-{_wrap(e.arg, 3)}", 3
    if isinstance(e, Pow):
        # right-associative: base must bind tighter than ^
        return f"{_wrap(e.base, 5)}^{_wrap(e.exponent, 4)}", 4
    if isinstance(e, Call):
        return f"{e.fn}({to_text(e.arg)})", 5
    if isinstance(e, Polygamma):
        if e.order == 0:
            return f"digamma({to_text(e.arg)})", 5
        return f"polygamma({e.order}, {to_text(e.arg)})", 5
    raise TypeError(type(e).__name__)
