"""Exact rational solutions of linear recurrences with polynomial coefficients.

The equation is ``sum_j b_j(z) f(z + j*eta) = b(z)``.  For ``eta = 1`` the
solver follows Abramov: a universal denominator ``u`` built from the
dispersion of the trailing and leading coefficients, then ``f = p/u`` with
``p`` found by undetermined coefficients up to a degree bound.  A rational
step ``eta`` is reduced to ``eta = 1`` by substituting ``z = eta*w``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .expr import Add, Const, Div, Expr, Mul, Neg, Pow, Sub, Var, div, integer_value
from .linalg import solve_affine
from .operators import ExprRecurrence
from .parse import parse
from .poly import RatPoly, gcd, integer_roots, interpolate, lcm, resultant
from .serialize import format_fraction, parse_fraction


class NotPolynomial(ValueError):
    pass


# ----------------------------------------------------------------------------
# polynomial I/O


def ratpoly_from_expr(e: Expr) -> RatPoly:
    """Convert a polynomial expression tree with rational constants to RatPoly."""
    if isinstance(e, Const):
        if e.value.imag != 0:
            raise NotPolynomial("complex coefficients are not supported by the exact solver")
        return RatPoly([Fraction(repr(e.value.real))])
    if isinstance(e, Var):
        return RatPoly.x()
    if isinstance(e, Add):
        return ratpoly_from_expr(e.left) + ratpoly_from_expr(e.right)
    if isinstance(e, Sub):
        return ratpoly_from_expr(e.left) - ratpoly_from_expr(e.right)
    if isinstance(e, Mul):
        return ratpoly_from_expr(e.left) * ratpoly_from_expr(e.right)
    if isinstance(e, Neg):
        return -ratpoly_from_expr(e.arg)
    if isinstance(e, Div):
        den = ratpoly_from_expr(e.right)
        if den.degree != 0:
            raise NotPolynomial("division by a non-constant")
        return ratpoly_from_expr(e.left).scale(1 / den.lc)
    if isinstance(e, Pow):
        k = integer_value(e.exponent)
        if k is None or k < 0:
            raise NotPolynomial("only nonnegative integer powers are polynomial")
        return ratpoly_from_expr(e.base) ** k
    raise NotPolynomial(f"{type(e).__name__} is not a polynomial node")


def parse_poly(obj) -> RatPoly:
    """A polynomial given as a list of coefficient strings (ascending) or as text like ``"z^2-1"``."""
    if isinstance(obj, RatPoly):
        return obj
    if isinstance(obj, (list, tuple)):
        return RatPoly(parse_fraction(c) for c in obj)
    if isinstance(obj, (int, Fraction)):
        return RatPoly([obj])
    return ratpoly_from_expr(parse(str(obj)))


def poly_to_json(p: RatPoly) -> list[str]:
    return [format_fraction(c) for c in p.coeffs]


# ----------------------------------------------------------------------------
# recurrences


@dataclass(frozen=True)
class PolynomialRecurrence:
    """``sum_j coeffs[j](z) f(z + j*step) = rhs(z)`` with exact polynomial data."""

    coeffs: tuple[RatPoly, ...]
    rhs: RatPoly = field(default_factory=RatPoly)
    step: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(parse_poly(b) for b in self.coeffs))
        object.__setattr__(self, "rhs", parse_poly(self.rhs))
        object.__setattr__(self, "step", parse_fraction(self.step))
        if len(self.coeffs) < 2:
            raise ValueError("a recurrence needs order n >= 1")
        if self.coeffs[0].is_zero() or self.coeffs[-1].is_zero():
            raise ValueError("leading and trailing coefficients must be nonzero")
        if self.step == 0:
            raise ValueError("step must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def homogeneous(self) -> bool:
        return self.rhs.is_zero()

    def normalized(self) -> PolynomialRecurrence:
        """The same equation in ``w = z/step``, so the step becomes 1."""
        if self.step == 1:
            return self
        s = self.step
        return PolynomialRecurrence(tuple(b.scale_argument(s) for b in self.coeffs), self.rhs.scale_argument(s), Fraction(1))

    def apply_polynomial(self, p: RatPoly) -> RatPoly:
        """``sum_j b_j(z) p(z + j*step)`` exactly."""
        out = RatPoly()
        for j, b in enumerate(self.coeffs):
            out = out + b * p.shift(j * self.step)
        return out

    def certificate(self, num: RatPoly, den: RatPoly) -> dict:
        """Cleared-denominator identity for ``f = num/den``.

        With ``M = lcm_j den(z + j*step)`` the recurrence is equivalent to
        ``sum_j b_j(z) num(z+j*step) M/den(z+j*step) - b(z) M = 0``.  The
        returned dict lists every polynomial so the identity can be rechecked
        by hand; ``residual`` is the left side and must be empty (zero).
        """
        shifted = [den.shift(j * self.step) for j in range(self.order + 1)]
        M = RatPoly([1])
        for d in shifted:
            M = lcm(M, d)
        terms = []
        total = RatPoly()
        for j, (b, d) in enumerate(zip(self.coeffs, shifted)):
            t = b * num.shift(j * self.step) * M.exact_div(d)
            terms.append(t)
            total = total + t
        total = total - self.rhs * M
        return {
            "multiplier": poly_to_json(M),
            "terms": [poly_to_json(t) for t in terms],
            "rhs_times_multiplier": poly_to_json(self.rhs * M),
            "residual": poly_to_json(total),
            "verified": total.is_zero(),
        }

    def to_expr_recurrence(self) -> ExprRecurrence:
        return ExprRecurrence(tuple(b.to_expr() for b in self.coeffs), self.rhs.to_expr(), complex(self.step))

    def to_dict(self) -> dict:
        return {
            "coeffs": [poly_to_json(b) for b in self.coeffs],
            "rhs": poly_to_json(self.rhs),
            "step": format_fraction(self.step),
        }

    @classmethod
    def from_dict(cls, d: dict) -> PolynomialRecurrence:
        return cls(tuple(parse_poly(b) for b in d["coeffs"]), parse_poly(d.get("rhs", [])), parse_fraction(d.get("step", "1")))


# ----------------------------------------------------------------------------
# dispersion and the universal denominator


def dispersion(p: RatPoly, q: RatPoly) -> set[int]:
    """``{h >= 0 : gcd(p(z), q(z+h))`` is non-constant``}``.

    ``R(h) = Res_z(p(z), q(z+h))`` is a polynomial in ``h`` of degree at most
    ``deg p * deg q``; it is recovered exactly by interpolation at integer
    points and its integer roots are the candidate shifts.
    """
    if p.is_zero() or q.is_zero():
        raise ValueError("dispersion of the zero polynomial")
    if p.degree == 0 or q.degree == 0:
        return set()
    npts = p.degree * q.degree + 1
    hs = list(range(npts))
    R = interpolate(hs, [resultant(p, q.shift(h)) for h in hs])
    if R.is_zero():  # cannot happen for nonzero p, q; kept as a guard
        raise ArithmeticError("resultant vanished identically in h")
    out = {h for h in integer_roots(R) if h >= 0}
    # the resultant test is exact, but double-check with the gcd definition
    return {h for h in out if gcd(p, q.shift(h)).degree > 0}


def universal_denominator(rec: PolynomialRecurrence) -> RatPoly:
    """Abramov's denominator bound for a step-1 recurrence.

    Starts from ``A = b_0(z)`` and ``B = b_n(z - n)`` and, for ``h`` from the
    largest dispersion down to 0, moves the common factor ``d`` of ``A(z)``
    and ``B(z+h)`` into ``u`` as ``d(z) d(z-1) ... d(z-h)``.
    """
    if rec.step != 1:
        rec = rec.normalized()
    n = rec.order
    A = rec.coeffs[0]
    B = rec.coeffs[-1].shift(-n)
    u = RatPoly([1])
    disp = dispersion(A, B)
    if not disp:
        return u
    for h in range(max(disp), -1, -1):
        d = gcd(A, B.shift(h))
        if d.degree <= 0:
            continue
        A = A.exact_div(d)
        B = B.exact_div(d.shift(-h))
        for i in range(h + 1):
            u = u * d.shift(-i)
    return u.monic()


# ----------------------------------------------------------------------------
# polynomial solutions


@dataclass
class PolynomialSolutionSet:
    particular: RatPoly | None
    basis: list[RatPoly]
    degree_bound: int
    diagnostics: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def _falling(d: RatPoly, k: int) -> RatPoly:
    out = RatPoly([1])
    for i in range(k):
        out = out * (d - RatPoly([i]))
    return out


def degree_bound(rec: PolynomialRecurrence) -> tuple[int, list[str]]:
    """Upper bound on the degree of any polynomial solution (step 1).

    Writing the operator as ``sum_k q_k(z) Delta^k`` with
    ``q_k = sum_j C(j, k) b_j``, a degree-``d`` polynomial is mapped to
    degree ``d + beta`` (``beta = max_k deg q_k - k``) unless the indicial
    polynomial ``Phi(d) = sum_{deg q_k - k = beta} lc(q_k) d(d-1)...(d-k+1)``
    vanishes at ``d``.  So ``d <= max(deg b - beta, largest root of Phi)``.
    """
    notes: list[str] = []
    n = rec.order
    q = []
    for k in range(n + 1):
        qk = RatPoly()
        for j in range(k, n + 1):
            qk = qk + rec.coeffs[j].scale(comb(j, k))
        q.append(qk)
    beta = max(qk.degree - k for k, qk in enumerate(q) if not qk.is_zero())
    phi = RatPoly()
    for k, qk in enumerate(q):
        if not qk.is_zero() and qk.degree - k == beta:
            phi = phi + _falling(RatPoly.x(), k).scale(qk.lc)
    candidates = [-1]
    if phi.is_zero():
        # Phi has a term of exact degree k for the largest contributing k, so this is unreachable
        cap = 2 * max(b.degree for b in rec.coeffs) + n + 2
        notes.append(f"indicial polynomial vanished; using fallback cap {cap}")
        candidates.append(max(cap, rec.rhs.degree + n))
    else:
        candidates.extend(r for r in integer_roots(phi) if r >= 0)
    if not rec.rhs.is_zero():
        candidates.append(rec.rhs.degree - beta)
    return max(candidates), notes


def polynomial_solutions(rec: PolynomialRecurrence) -> PolynomialSolutionSet:
    """All polynomial solutions of a step-1 recurrence as particular + kernel basis."""
    if rec.step != 1:
        rec = rec.normalized()
    d, notes = degree_bound(rec)
    if d < 0:
        ok = rec.homogeneous
        return PolynomialSolutionSet(RatPoly() if ok else None, [], d, notes + ([] if ok else ["no polynomial solution"]))
    images = [rec.apply_polynomial(RatPoly.monomial(i)) for i in range(d + 1)]
    rows = max([im.degree for im in images] + [rec.rhs.degree]) + 1
    matrix = [[im[k] for im in images] for k in range(rows)]
    rhs = [rec.rhs[k] for k in range(rows)]
    particular, kernel = solve_affine(matrix, rhs, d + 1)
    basis = [RatPoly(v) for v in kernel]
    if particular is None:
        return PolynomialSolutionSet(None, basis, d, notes + ["no polynomial solution"])
    return PolynomialSolutionSet(RatPoly(particular), basis, d, notes)


# ----------------------------------------------------------------------------
# rational solutions


@dataclass(frozen=True)
class RationalFunction:
    num: RatPoly
    den: RatPoly

    @classmethod
    def reduced(cls, num: RatPoly, den: RatPoly) -> RationalFunction:
        """Lowest terms with a monic denominator."""
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return cls(RatPoly(), RatPoly([1]))
        g = gcd(num, den)
        num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        return cls(num.scale(1 / lc), den.scale(1 / lc))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def to_text(self) -> str:
        if self.den.degree == 0:
            return self.num.to_text()
        n, d = self.num.to_text(), self.den.to_text()
        if any(t in n.lstrip("-") for t in (" ", "/")):
            n = f"({n})"
        if " " in d:
            d = f"({d})"
        return f"{n}/{d}"

    def to_expr(self) -> Expr:
        return div(self.num.to_expr(), self.den.to_expr())

    def scale_argument(self, s) -> RationalFunction:
        return RationalFunction.reduced(self.num.scale_argument(s), self.den.scale_argument(s))

    def to_dict(self) -> dict:
        return {"num": poly_to_json(self.num), "den": poly_to_json(self.den), "text": self.to_text()}


@dataclass
class RationalSolutionSet:
    recurrence: PolynomialRecurrence
    particular: RationalFunction | None
    basis: list[RationalFunction]
    universal_denominator: RatPoly
    degree_bound: int
    certificates: list[dict]
    transform: str | None = None
    diagnostics: list[str] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return all(c["verified"] for c in self.certificates)

    def summary(self) -> str:
        lines = []
        if self.transform:
            lines.append(f"transform: {self.transform}")
        lines.append(f"universal denominator: {self.universal_denominator.to_text()}")
        lines.append(f"degree bound: {self.degree_bound}")
        if self.particular is None:
            lines.append("particular solution: none")
        else:
            lines.append(f"particular solution: {self.particular.to_text()}")
        if self.basis:
            lines.append("homogeneous basis: " + ", ".join(b.to_text() for b in self.basis))
        else:
            lines.append("homogeneous basis: (empty)")
        lines.append("certificate: " + ("zero polynomial" if self.verified else "FAILED"))
        lines.extend(self.diagnostics)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "recurrence": self.recurrence.to_dict(),
            "particular": None if self.particular is None else self.particular.to_dict(),
            "basis": [b.to_dict() for b in self.basis],
            "universal_denominator": poly_to_json(self.universal_denominator),
            "degree_bound": self.degree_bound,
            "transform": self.transform,
            "certificates": self.certificates,
            "verified": self.verified,
            "diagnostics": list(self.diagnostics),
        }


def cleared_recurrence(rec: PolynomialRecurrence, u: RatPoly) -> PolynomialRecurrence:
    """The recurrence satisfied by ``p`` when ``f = p/u`` (step 1).

    Multiplies through by ``L = lcm_j u(z+j)`` and divides all coefficients by
    their common polynomial factor to keep degrees small.
    """
    shifted = [u.shift(j) for j in range(rec.order + 1)]
    L = RatPoly([1])
    for s in shifted:
        L = lcm(L, s)
    coeffs = [b * L.exact_div(s) for b, s in zip(rec.coeffs, shifted)]
    rhs = rec.rhs * L
    g = RatPoly()
    for c in coeffs + ([rhs] if not rhs.is_zero() else []):
        g = gcd(g, c)
    if g.degree > 0:
        coeffs = [c.exact_div(g) for c in coeffs]
        rhs = rhs.exact_div(g)
    return PolynomialRecurrence(tuple(coeffs), rhs)


def rational_solutions(rec: PolynomialRecurrence) -> RationalSolutionSet:
    """Every rational solution, as a particular solution plus a kernel basis.

    Each returned function is substituted back into the original recurrence
    exactly; the certificates hold the cleared-denominator identities.
    """
    original = rec
    transform = None
    if rec.step != 1:
        transform = f"z = {format_fraction(rec.step)}*w"
        rec = rec.normalized()
    u = universal_denominator(rec)
    poly_rec = cleared_recurrence(rec, u)
    ps = polynomial_solutions(poly_rec)
    diagnostics = list(ps.diagnostics)

    def back(p: RatPoly) -> RationalFunction:
        f = RationalFunction.reduced(p, u)
        # f was found in w = z/step; g(z) = f(z/step)
        return f if original.step == 1 else f.scale_argument(1 / original.step)

    particular = None if ps.particular is None else back(ps.particular)
    basis = [back(p) for p in ps.basis]
    certificates = []
    for f in ([particular] if particular is not None else []):
        certificates.append(original.certificate(f.num, f.den))
    if basis:
        hom = PolynomialRecurrence(original.coeffs, RatPoly(), original.step)
        certificates.extend(hom.certificate(b.num, b.den) for b in basis)
    if not all(c["verified"] for c in certificates):
        diagnostics.append("exact substitution check failed")
    return RationalSolutionSet(original, particular, basis, u, ps.degree_bound, certificates, transform, diagnostics)


def recurrence_from_coeffs(coeffs: Sequence, rhs=0, step=1) -> PolynomialRecurrence:
    return PolynomialRecurrence(tuple(parse_poly(c) for c in coeffs), parse_poly(rhs), parse_fraction(step))
