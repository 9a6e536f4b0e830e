"""General solutions of ``L(f) = A f`` built from characteristic roots.

Each root ``rho`` of ``P(w) = sum_j a_j w^j - A`` with multiplicity ``N``
contributes the terms ``z^m rho^(z/c) pi_m(z)`` for ``m = 0 .. N-1``, where
``pi_m`` is any ``c``-periodic meromorphic function.  Periodic functions are
drawn from a small library (:class:`PeriodicAtom`) and every atom is checked
numerically for periodicity before it is used.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .evaluate import evaluate_many
from .expr import Const, Expr, Z, ZERO, add, cos, div, exp, mul, power, sin, substitute, tan, to_text
from .operators import (
    DEFAULT_POLE_RADIUS,
    LinearDifferenceOperator,
    ResidualReport,
    near_pole,
    residual,
)
from .parse import parse
from .poly import ComplexPoly
from .roots import RootSet, roots
from .serialize import format_complex, parse_complex

ATOM_KINDS = ("constant", "exp", "sin", "cos", "tan", "rational_q", "expr")
PERIODICITY_TOL = 1e-10
ZERO_ROOT_TOL = 1e-12


class PeriodicityError(ValueError):
    """An atom failed the numerical periodicity gate."""


class SolutionError(ValueError):
    pass


@dataclass(frozen=True)
class PeriodicAtom:
    """A ``c``-periodic meromorphic function from a fixed library.

    * ``constant``: ``kappa``
    * ``exp``: ``exp(2 pi i k z / c)``
    * ``sin`` / ``cos`` / ``tan``: of ``2 pi k z / c``
    * ``rational_q``: ``num(q) / den(q)`` with ``q = exp(2 pi i k z / c)``
    * ``expr``: any user expression, admitted only through the gate
    """

    kind: str
    period: complex
    k: int = 1
    kappa: complex = 1
    num: ComplexPoly | None = None
    den: ComplexPoly | None = None
    expr: Expr | None = None

    def __post_init__(self):
        if self.kind not in ATOM_KINDS:
            raise ValueError(f"unknown atom kind {self.kind!r}; expected one of {ATOM_KINDS}")
        if complex(self.period) == 0:
            raise ValueError("period must be nonzero")
        object.__setattr__(self, "period", complex(self.period))
        object.__setattr__(self, "kappa", complex(self.kappa))
        if self.kind == "rational_q" and (self.num is None or self.den is None):
            raise ValueError("rational_q atoms need num and den polynomials")
        if self.kind == "expr" and self.expr is None:
            raise ValueError("expr atoms need an expression")

    # convenience constructors
    @classmethod
    def constant(cls, c: complex, kappa: complex = 1) -> PeriodicAtom:
        return cls("constant", c, kappa=kappa)

    @classmethod
    def exponential(cls, c: complex, k: int = 1) -> PeriodicAtom:
        return cls("exp", c, k=k)

    @classmethod
    def rational_in_q(cls, c: complex, num: Sequence, den: Sequence, k: int = 1) -> PeriodicAtom:
        return cls("rational_q", c, k=k, num=ComplexPoly(num), den=ComplexPoly(den))

    @classmethod
    def from_expr(cls, c: complex, e: Expr | str) -> PeriodicAtom:
        return cls("expr", c, expr=parse(e) if isinstance(e, str) else e)

    def q(self) -> Expr:
        return exp(mul(Const(2j * math.pi * self.k / self.period), Z))

    def to_expr(self) -> Expr:
        if self.kind == "constant":
            return Const(self.kappa)
        if self.kind == "exp":
            return self.q()
        if self.kind in ("sin", "cos", "tan"):
            fn = {"sin": sin, "cos": cos, "tan": tan}[self.kind]
            return fn(mul(Const(2 * math.pi * self.k / self.period), Z))
        if self.kind == "rational_q":
            q = self.q()
            return div(substitute(self.num.to_expr(), q), substitute(self.den.to_expr(), q))
        return self.expr

    @property
    def is_zero(self) -> bool:
        return self.kind == "constant" and self.kappa == 0

    def poles_in_disk(self, radius: float, center: complex = 0j) -> list[complex]:
        """Pole locations of tan and rational_q atoms inside a disk."""
        c, k = self.period, self.k
        if self.kind == "tan":
            # 2 pi k z / c = pi/2 + m pi
            base, step = c / (4 * k), c / (2 * k)
        elif self.kind == "rational_q":
            out = []
            for q0 in self.den.numpy_roots() if self.den.degree > 0 else []:
                if q0 == 0:
                    continue
                base = c * cmath.log(q0) / (2j * math.pi * k)
                out += _lattice(base, c / k, radius, center)
            return out
        else:
            return []
        return _lattice(base, step, radius, center)

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind, "period": format_complex(self.period)}
        if self.kind == "constant":
            d["kappa"] = format_complex(self.kappa)
        elif self.kind == "expr":
            d["expr"] = to_text(self.expr)
        else:
            d["k"] = self.k
        if self.kind == "rational_q":
            d["num"] = [format_complex(a) for a in self.num.coeffs]
            d["den"] = [format_complex(a) for a in self.den.coeffs]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> PeriodicAtom:
        kind, c = d["kind"], parse_complex(d["period"])
        if kind == "constant":
            return cls.constant(c, parse_complex(d.get("kappa", 1)))
        if kind == "expr":
            return cls.from_expr(c, d["expr"])
        if kind == "rational_q":
            return cls.rational_in_q(
                c, [parse_complex(a) for a in d["num"]], [parse_complex(a) for a in d["den"]], int(d.get("k", 1))
            )
        return cls(kind, c, k=int(d.get("k", 1)))


def _lattice(base: complex, step: complex, radius: float, center: complex) -> list[complex]:
    # points base + m*step within the disk; m range from projecting onto step
    span = int(math.ceil((radius + abs(base - center)) / abs(step))) + 1
    pts = [base + m * step for m in range(-span, span + 1)]
    return [p for p in pts if abs(p - center) < radius]


def check_periodic(
    atom: PeriodicAtom | Expr,
    period: complex | None = None,
    n: int = 50,
    tol: float = PERIODICITY_TOL,
    seed: int = 0,
) -> float:
    """Largest relative periodicity defect ``|a(z+c) - a(z)| / |a(z)|``.

    Raises :class:`PeriodicityError` when it exceeds ``tol``.  Points within
    the default pole radius of a pole are resampled away.
    """
    e = atom.to_expr() if isinstance(atom, PeriodicAtom) else atom
    c = complex(period if period is not None else atom.period)
    rng = np.random.default_rng(seed)
    zs = 3.0 * (rng.uniform(-1, 1, 4 * n) + 1j * rng.uniform(-1, 1, 4 * n))
    keep = ~(near_pole(e, zs, DEFAULT_POLE_RADIUS) | near_pole(e, zs + c, DEFAULT_POLE_RADIUS))
    zs = zs[keep][:n]
    a, ba = evaluate_many(e, zs)
    b, bb = evaluate_many(e, zs + c)
    ok = ~(ba | bb)
    if not np.any(ok):
        raise PeriodicityError("periodicity check found no evaluable sample points")
    a, b = a[ok], b[ok]
    scale = np.maximum(np.abs(a), np.abs(b))
    gap = np.abs(b - a)
    defect = float(np.max(np.where(scale > 0, gap / np.where(scale > 0, scale, 1.0), 0.0)))
    if defect > tol:
        raise PeriodicityError(f"atom is not {format_complex(c)}-periodic: relative defect {defect:.3g}")
    return defect


@dataclass(frozen=True)
class SolutionTerm:
    """``z^m * rho^(z/c) * atom(z)`` with ``rho^(z/c) = exp((z/c)(Log rho + 2 pi i branch))``."""

    root: complex
    power: int
    atom: PeriodicAtom
    branch: int = 0

    def __post_init__(self):
        if complex(self.root) == 0:
            raise ValueError("root 0 gives no term: 0^(z/c) is undefined")
        if self.power < 0:
            raise ValueError("power must be nonnegative")
        object.__setattr__(self, "root", complex(self.root))

    def log_root(self) -> complex:
        return cmath.log(self.root) + 2j * math.pi * self.branch

    def to_expr(self, c: complex) -> Expr:
        if self.atom.is_zero:
            return ZERO
        quasi = exp(mul(div(Z, Const(complex(c))), Const(self.log_root())))
        e = mul(quasi, self.atom.to_expr())
        if self.power:
            e = mul(power(Z, Const(self.power)), e)
        return e

    def to_dict(self) -> dict:
        d = {"root": format_complex(self.root), "mult_index": self.power, "atom": self.atom.to_dict()}
        if self.branch:
            d["branch_shift"] = self.branch
        return d


@dataclass
class GeneralSolution:
    operator: LinearDifferenceOperator
    eigenvalue: complex
    roots: RootSet
    terms: list[SolutionTerm]
    dropped_roots: list[tuple[complex, int]] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)
    mode: str = "eigen"
    branch: str = "principal"

    @property
    def shift(self) -> complex:
        return self.operator.shift

    @property
    def coefficient_sum_zero(self) -> bool:
        return abs(self.operator.coefficient_sum) <= 1e-12 * max(abs(a) for a in self.operator.coeffs)

    def to_expr(self) -> Expr:
        e: Expr = ZERO
        for t in self.terms:
            e = add(e, t.to_expr(self.shift))
        return e

    def describe(self) -> str:
        parts = []
        for t in self.terms:
            zpow = "" if t.power == 0 else ("z*" if t.power == 1 else f"z^{t.power}*")
            parts.append(f"{zpow}({format_complex(t.root)})^(z/c)*pi(z)")
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {
            "eigenvalue": format_complex(self.eigenvalue),
            "terms": [t.to_dict() for t in self.terms],
            "branch": self.branch,
            "mode": self.mode,
            "operator": self.operator.to_dict(),
            "roots": [{"root": format_complex(r.value), "multiplicity": r.multiplicity} for r in self.roots],
            "dropped_roots": [{"root": format_complex(r), "multiplicity": m} for r, m in self.dropped_roots],
            "coefficient_sum_zero": self.coefficient_sum_zero,
            "diagnostics": list(self.diagnostics),
        }


AtomChoice = PeriodicAtom | Sequence[PeriodicAtom] | None


def _atom_for(atoms, i: int, m: int, rho: complex, c: complex) -> PeriodicAtom:
    if atoms is None:
        return PeriodicAtom.constant(c)
    if callable(atoms):
        return atoms(i, m, rho)
    choice = atoms[i] if i < len(atoms) else None
    if choice is None:
        return PeriodicAtom.constant(c)
    if isinstance(choice, PeriodicAtom):
        return choice
    return choice[m] if m < len(choice) else PeriodicAtom.constant(c)


def build_general_solution(
    op: LinearDifferenceOperator,
    A: complex,
    atoms: Sequence[AtomChoice] | Callable | None = None,
    generic: bool = False,
    cluster_tol: float = 1e-6,
) -> GeneralSolution:
    """Assemble the solution family of ``L(f) = A f``.

    ``atoms`` picks the periodic factor per nonzero root (in sorted root
    order); an entry may be a single atom reused for every power, or one atom
    per power ``m = 0 .. N-1``.  A callable ``(root_index, m, rho) -> atom``
    also works.  Missing entries default to the constant 1.
    """
    A = complex(A)
    diagnostics: list[str] = []
    mode = "eigen"
    if A == 0:
        if not generic:
            raise SolutionError("A = 0 is outside the eigen setting; pass generic=True to solve L(f) = 0")
        mode = "generic"
        diagnostics.append("generic mode: A = 0, solving the homogeneous equation L(f) = 0")
    P = op.characteristic_poly(A)
    if P.degree < 1:
        raise SolutionError("characteristic polynomial is constant")
    rs = roots(P, cluster_tol=cluster_tol)
    diagnostics.extend(rs.diagnostics)
    if not rs.converged:
        raise SolutionError("root finder did not converge: " + "; ".join(rs.diagnostics))
    scale = max(abs(r.value) for r in rs)
    kept, dropped = [], []
    for r in rs:
        if abs(r.value) <= ZERO_ROOT_TOL * max(scale, 1.0):
            dropped.append((0j, r.multiplicity))
            diagnostics.append(f"root 0 (multiplicity {r.multiplicity}) dropped: 0^(z/c) is undefined")
        else:
            kept.append(r)
    if not kept:
        raise SolutionError("all characteristic roots are zero")
    c = op.shift
    terms = []
    for i, r in enumerate(kept):
        for m in range(r.multiplicity):
            atom = _atom_for(atoms, i, m, r.value, c)
            check_periodic(atom, c)
            terms.append(SolutionTerm(r.value, m, atom))
    if any(r.multiplicity > 1 for r in kept):
        diagnostics.append("multiple roots present: powers m = 0 .. N-1 included for each")
    return GeneralSolution(op, A, rs, terms, dropped, diagnostics, mode)


def verify_general_solution(
    gs: GeneralSolution, samples=None, pole_radius: float = DEFAULT_POLE_RADIUS
) -> ResidualReport:
    return residual(gs.operator, gs.to_expr(), gs.eigenvalue, samples, pole_radius)


def to_expr(gs: GeneralSolution) -> Expr:
    return gs.to_expr()


@dataclass(frozen=True)
class QuadraticRoots:
    kind: str  # "distinct", "double" or "near-degenerate"
    roots: tuple[complex, ...]
    discriminant: complex

    def to_dict(self) -> dict:
        return {"kind": self.kind, "roots": [format_complex(r) for r in self.roots],
                "discriminant": format_complex(self.discriminant)}


def quadratic_roots(a2, a1, a0, B, rel_tol: float = 1e-12) -> QuadraticRoots:
    """Roots of ``a2 w^2 + a1 w + (a0 - B)``.

    The double-root branch is taken when ``a1^2 + 4 a2 B = 4 a2 a0`` holds
    exactly.  A discriminant that is merely tiny compared with its terms is
    labelled ``near-degenerate`` and both formula roots are returned.
    """
    if a2 == 0:
        raise ValueError("a2 must be nonzero")
    disc = a1 * a1 + 4 * a2 * B - 4 * a2 * a0
    if disc == 0:
        return QuadraticRoots("double", (complex(-a1 / (2 * a2)),), complex(disc))
    a2c, a1c, dc = complex(a2), complex(a1), complex(disc)
    c0 = complex(a0 - B)
    sq = cmath.sqrt(dc)
    # compute the larger root from the formula and its partner from r1*r2 = c0/a2
    up, down = -a1c + sq, -a1c - sq
    if abs(up) >= abs(down):
        r_plus = up / (2 * a2c)
        r_minus = c0 / (a2c * r_plus)
    else:
        r_minus = down / (2 * a2c)
        r_plus = c0 / (a2c * r_minus)
    terms = abs(a1c) ** 2 + 4 * abs(a2c) * abs(c0)
    kind = "near-degenerate" if abs(dc) <= rel_tol * terms else "distinct"
    return QuadraticRoots(kind, (r_plus, r_minus), dc)


def quadratic_operator_solution(a2, a1, a0, B, c: complex = 1) -> tuple[QuadraticRoots, list[Expr]]:
    """The single-root solution forms ``R^(z/c) pi(z)`` (with ``pi = 1``)."""
    qr = quadratic_roots(a2, a1, a0, B)
    forms = [exp(mul(div(Z, Const(complex(c))), Const(cmath.log(r)))) for r in qr.roots if r != 0]
    return qr, forms
