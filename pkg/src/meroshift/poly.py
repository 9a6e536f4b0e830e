"""Dense univariate polynomials: exact over Q (:class:`RatPoly`) and
complex floating point (:class:`ComplexPoly`).

Coefficients are stored in ascending degree order.  The zero polynomial has
an empty coefficient tuple and degree -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .expr import Const, Expr, Z, add, mul


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # repr round-trips, so "0.1" means 1/10 rather than the binary double
        return Fraction(repr(x))
    return Fraction(x)


def _trim(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class RatPoly:
    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim(_frac(c) for c in coeffs))

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c) -> RatPoly:
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> RatPoly:
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> RatPoly:
        p = cls([lead])
        for r in roots:
            p = p * cls([-_frac(r), 1])
        return p

    @classmethod
    def x(cls) -> RatPoly:
        return cls([0, 1])

    # -- basic queries ------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return self.degree <= 0

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"RatPoly({self})"

    def __str__(self):
        return self.to_text()

    def to_text(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                if a == 1:
                    body = mono
                elif a.denominator == 1:
                    body = f"{a}*{mono}"
                else:
                    body = f"({a})*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> RatPoly:
        other = _as_ratpoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> RatPoly:
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> RatPoly:
        return self + (-_as_ratpoly(other))

    def __rsub__(self, other) -> RatPoly:
        return _as_ratpoly(other) - self

    def __mul__(self, other) -> RatPoly:
        other = _as_ratpoly(other)
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> RatPoly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = RatPoly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> RatPoly:
        c = _frac(c)
        return RatPoly(c * a for a in self.coeffs)

    def divrem(self, other: RatPoly) -> tuple[RatPoly, RatPoly]:
        other = _as_ratpoly(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return RatPoly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        inv = 1 / other.lc
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv
            quot[k - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return RatPoly(quot), RatPoly(rem[:dq])

    def __floordiv__(self, other) -> RatPoly:
        return self.divrem(other)[0]

    def __mod__(self, other) -> RatPoly:
        return self.divrem(other)[1]

    def exact_div(self, other: RatPoly) -> RatPoly:
        q, r = self.divrem(other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def monic(self) -> RatPoly:
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def derivative(self) -> RatPoly:
        return RatPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    # -- evaluation and substitution ----------------------------------------

    def __call__(self, x):
        if isinstance(x, RatPoly):
            return self.compose(x)
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
        else:
            acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(acc, Fraction) else float(c))
        return acc

    def eval_at_rational(self, x) -> Fraction:
        return self(_frac(x))

    def compose(self, inner: RatPoly) -> RatPoly:
        out = RatPoly()
        for c in reversed(self.coeffs):
            out = out * inner + RatPoly([c])
        return out

    def shift(self, k) -> RatPoly:
        """``p(z + k)`` for a rational ``k`` (exact Taylor shift)."""
        k = _frac(k)
        if k == 0 or self.degree <= 0:
            return self
        # Horner with binomial updates keeps this exact and O(n^2)
        c = list(self.coeffs)
        n = len(c)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += k * c[j + 1]
        return RatPoly(c)

    def shift_by_integer(self, k: int) -> RatPoly:
        return self.shift(int(k))

    def scale_argument(self, s) -> RatPoly:
        """``p(s*z)``."""
        s = _frac(s)
        return RatPoly(c * s**k for k, c in enumerate(self.coeffs))

    # -- gcd, content ---------------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` primitive integral."""
        if self.is_zero():
            return Fraction(0)
        den = reduce(math.lcm, (c.denominator for c in self.coeffs), 1)
        num = reduce(math.gcd, (c.numerator * (den // c.denominator) for c in self.coeffs), 0)
        return Fraction(num, den)

    def primitive(self) -> RatPoly:
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if self.is_zero():
            return self
        p = self.scale(1 / self.content())
        return -p if p.lc < 0 else p

    def integer_coeffs(self) -> list[int]:
        return [int(c) for c in self.primitive().coeffs]

    def to_expr(self) -> Expr:
        out: Expr = Const(0)
        for c in reversed(self.coeffs):
            out = add(mul(out, Z), Const(float(c)))
        return out

    def to_complex(self) -> ComplexPoly:
        return ComplexPoly([complex(float(c)) for c in self.coeffs])


def _as_ratpoly(x) -> RatPoly:
    if isinstance(x, RatPoly):
        return x
    return RatPoly([x])


def gcd(p: RatPoly, q: RatPoly) -> RatPoly:
    """Monic gcd (zero if both are zero)."""
    a, b = _as_ratpoly(p), _as_ratpoly(q)
    while not b.is_zero():
        a, b = b, a % b
        # keep intermediate coefficients small
        if not b.is_zero():
            b = b.primitive()
    return a.monic()


def lcm(p: RatPoly, q: RatPoly) -> RatPoly:
    if p.is_zero() or q.is_zero():
        return RatPoly()
    return (p * q).exact_div(gcd(p, q)).monic()


def sylvester_matrix(p: RatPoly, q: RatPoly) -> list[list[Fraction]]:
    m, n = p.degree, q.degree
    size = m + n
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([Fraction(0)] * i + pc + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + qc + [Fraction(0)] * (size - n - 1 - i))
    return rows


def determinant(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by Gaussian elimination over Q."""
    a = [list(map(Fraction, row)) for row in matrix]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def resultant(p: RatPoly, q: RatPoly) -> Fraction:
    """det of the Sylvester matrix with the rows of ``p`` first.

    With this convention ``resultant(p, q) = lc(p)^deg(q) * prod q(roots of p)``.
    """
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    if p.degree == 0:
        return p.lc ** q.degree
    if q.degree == 0:
        return q.lc ** p.degree
    return determinant(sylvester_matrix(p, q))


def interpolate(xs: Sequence, ys: Sequence) -> RatPoly:
    """Exact Newton interpolation through ``(xs[i], ys[i])``."""
    xs = [_frac(x) for x in xs]
    coef = [_frac(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = RatPoly([coef[-1]])
    for i in range(n - 2, -1, -1):
        out = out * RatPoly([-xs[i], 1]) + RatPoly([coef[i]])
    return out


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def integer_roots(p: RatPoly) -> list[int]:
    """All integer zeros of ``p`` (each listed once), ascending."""
    if p.is_zero():
        raise ValueError("integer roots of the zero polynomial")
    coeffs = p.integer_coeffs()
    roots = []
    # strip the power of z
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k:
        roots.append(0)
    coeffs = coeffs[k:]
    if len(coeffs) == 1:
        return roots
    a0, an = coeffs[0], coeffs[-1]
    bound = 1 + max(abs(c) for c in coeffs[:-1]) // abs(an)
    if abs(a0) <= 10**12:
        cands = [d for d in _divisors(a0) if d <= bound]
    else:
        approx = ComplexPoly([complex(c) for c in coeffs]).numpy_roots()
        cands = sorted({abs(round(r.real)) for r in approx if abs(r.imag) < 0.5})
    q = RatPoly(coeffs)
    for d in cands:
        for s in (d, -d):
            if s != 0 and q(Fraction(s)) == 0:
                roots.append(s)
    return sorted(set(roots))


# ----------------------------------------------------------------------------
# complex floating point polynomials


class ComplexPoly:
    """Complex-coefficient polynomial, ascending order, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        c = np.asarray(list(coeffs), dtype=complex)
        nz = np.nonzero(c)[0]
        self.coeffs = c[: nz[-1] + 1].copy() if nz.size else np.zeros(0, complex)
        self.coeffs.setflags(write=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __repr__(self):
        return f"ComplexPoly({list(self.coeffs)})"

    def __eq__(self, other):
        return isinstance(other, ComplexPoly) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        acc = np.zeros(w.shape, dtype=complex)
        for c in self.coeffs[::-1]:
            acc = acc * w + c
        return acc

    def derivative(self, k: int = 1) -> ComplexPoly:
        c = self.coeffs
        for _ in range(k):
            c = np.array([j * c[j] for j in range(1, len(c))], dtype=complex)
        return ComplexPoly(c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def abs_eval(self, w) -> np.ndarray:
        """``sum |a_j| |w|^j``: the rounding-error scale of ``p(w)``."""
        w = np.abs(np.asarray(w, dtype=complex))
        acc = np.zeros(w.shape)
        for c in np.abs(self.coeffs[::-1]):
            acc = acc * w + c
        return acc

    def numpy_roots(self) -> np.ndarray:
        return np.roots(self.coeffs[::-1])

    def to_expr(self, var: Expr = Z) -> Expr:
        out: Expr = Const(0)
        for c in self.coeffs[::-1]:
            out = add(mul(out, var), Const(complex(c)))
        return out

    def allclose(self, other: ComplexPoly, tol: float = 1e-12) -> bool:
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.pad(self.coeffs, (0, n - len(self.coeffs)))
        b = np.pad(other.coeffs, (0, n - len(other.coeffs)))
        return bool(np.all(np.abs(a - b) <= tol * max(1.0, float(np.max(np.abs(a)))) ))

