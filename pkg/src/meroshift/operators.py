"""Linear difference operators, their mixed difference-differential variant,
characteristic polynomials and pointwise residual checks.

A difference operator of order ``n`` with step ``c`` acts as
``L(f)(z) = sum_j a_j f(z + j c)``.  Residual checks sample the identity
``L(f) = A f`` on a point set and skip samples that sit on (or within
``pole_radius`` of) a pole of any shifted copy of ``f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .evaluate import evaluate_many
from .expr import Const, Expr, ZERO, add, as_expr, as_fraction, derivative, mul, nth_derivative, shift
from .poly import ComplexPoly
from .serialize import format_complex, parse_complex

RELATIVE_FLOOR = 1e-30
DEFAULT_POLE_RADIUS = 1e-3
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


class ResidualError(ValueError):
    """Raised when no sample point could be evaluated."""


# ----------------------------------------------------------------------------
# sample sets


def disk_samples(n: int = 100, radius: float = 5.0, center: complex = 0j) -> np.ndarray:
    """Vogel (sunflower) spiral: ``n`` evenly spread points in a closed disk."""
    k = np.arange(n)
    r = radius * np.sqrt((k + 0.5) / n)
    return center + r * np.exp(1j * GOLDEN_ANGLE * k)


def _van_der_corput(n: int, base: int) -> np.ndarray:
    out = np.empty(n)
    for i in range(n):
        x, denom, k = 0.0, 1.0, i + 1
        while k:
            k, digit = divmod(k, base)
            denom *= base
            x += digit / denom
        out[i] = x
    return out


def box_samples(n: int, re: tuple[float, float], im: tuple[float, float]) -> np.ndarray:
    """Halton points (bases 2 and 3) in the rectangle ``re x im``."""
    u, v = _van_der_corput(n, 2), _van_der_corput(n, 3)
    return (re[0] + (re[1] - re[0]) * u) + 1j * (im[0] + (im[1] - im[0]) * v)


def near_pole(f: Expr, zs: np.ndarray, radius: float) -> np.ndarray:
    """Mask of points estimated to lie within ``radius`` of a pole of ``f``.

    Uses the Newton step ``|D/D'|`` of the denominator ``D`` of ``f`` as a
    distance estimate.  Expressions without a numerator/denominator split get
    no mask; for them only hard pole flags from evaluation apply.
    """
    zs = np.asarray(zs, dtype=complex)
    frac = as_fraction(f)
    if frac is None or radius <= 0:
        return np.zeros(zs.shape, bool)
    den = frac[1]
    if isinstance(den, Const):
        return np.zeros(zs.shape, bool)
    d, bad_d = evaluate_many(den, zs)
    dd, bad_dd = evaluate_many(derivative(den), zs)
    with np.errstate(all="ignore"):
        dist = np.abs(d) / np.abs(dd)
    dist = np.where(np.isnan(dist), 0.0, dist)
    return bad_d | (dist < radius) | (bad_dd & (np.abs(np.nan_to_num(d)) < radius))


# ----------------------------------------------------------------------------
# residual reports


@dataclass
class ResidualReport:
    samples: int
    max_abs: float
    max_rel: float
    skipped: list[complex] = field(default_factory=list)
    worst_point: complex | None = None
    denominator: str = "|A f(z)|"

    @property
    def evaluated(self) -> int:
        return self.samples - len(self.skipped)

    def passed(self, tol: float) -> bool:
        return self.max_rel < tol

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "evaluated": self.evaluated,
            "max_abs": self.max_abs,
            "max_rel": self.max_rel,
            "skipped": [format_complex(z) for z in self.skipped],
            "worst_point": None if self.worst_point is None else format_complex(self.worst_point),
            "relative_to": self.denominator,
        }


def _report(zs, absres, scale, bad, denominator) -> ResidualReport:
    if np.all(bad):
        raise ResidualError(f"all {len(zs)} sample points hit poles or overflow")
    good = ~bad
    rel = absres / np.maximum(scale, RELATIVE_FLOOR)
    a, r = absres[good], rel[good]
    i = int(np.argmax(r))
    return ResidualReport(
        samples=len(zs),
        max_abs=float(np.max(a)),
        max_rel=float(np.max(r)),
        skipped=[complex(z) for z in zs[bad]],
        worst_point=complex(zs[good][i]),
        denominator=denominator,
    )


def _shifted_values(f: Expr, zs, deltas, pole_radius):
    vals, bad = [], np.zeros(len(zs), bool)
    for d in deltas:
        v, b = evaluate_many(f, zs + d)
        vals.append(v)
        bad |= b | near_pole(f, zs + d, pole_radius)
    return vals, bad


# ----------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class LinearDifferenceOperator:
    """``L(f)(z) = sum_{j=0}^{n} a_j f(z + j c)`` with constant coefficients."""

    shift: complex
    coeffs: tuple[complex, ...]
    coefficient_sum: complex = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        c = complex(self.shift)
        coeffs = tuple(complex(a) for a in self.coeffs)
        if c == 0:
            raise ValueError("shift c must be nonzero")
        if len(coeffs) < 2:
            raise ValueError("order must be at least 1 (need a_0 and a_1)")
        if coeffs[-1] == 0:
            raise ValueError("leading coefficient a_n must be nonzero")
        object.__setattr__(self, "shift", c)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "coefficient_sum", sum(coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def apply(self, f: Expr) -> Expr:
        out: Expr = ZERO
        for j, a in enumerate(self.coeffs):
            if a != 0:
                out = add(out, mul(Const(a), shift(f, j * self.shift)))
        return out

    def direct(self, f: Expr, zs) -> tuple[np.ndarray, np.ndarray]:
        """``sum_j a_j f(z + j c)`` from pointwise evaluations of ``f``."""
        zs = np.asarray(zs, dtype=complex)
        total = np.zeros(zs.shape, complex)
        bad = np.zeros(zs.shape, bool)
        for j, a in enumerate(self.coeffs):
            v, b = evaluate_many(f, zs + j * self.shift)
            total += a * np.nan_to_num(v)
            bad |= b
        return np.where(bad, np.nan, total), bad

    def characteristic_poly(self, A: complex = 1) -> ComplexPoly:
        c = list(self.coeffs)
        c[0] -= complex(A)
        return ComplexPoly(c)

    def to_dict(self) -> dict:
        return {"shift": format_complex(self.shift), "coeffs": [format_complex(a) for a in self.coeffs]}

    @classmethod
    def from_dict(cls, d: dict) -> LinearDifferenceOperator:
        return cls(parse_complex(d.get("shift", 1)), tuple(parse_complex(a) for a in d["coeffs"]))


def delta_n(c: complex, n: int) -> LinearDifferenceOperator:
    """Forward difference of order ``n``: ``a_j = (-1)^(n-j) C(n, j)``."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"difference order must be a positive integer, got {n!r}")
    return LinearDifferenceOperator(c, tuple((-1) ** (n - j) * math.comb(n, j) for j in range(n + 1)))


def apply(op: LinearDifferenceOperator, f: Expr) -> Expr:
    return op.apply(f)


def characteristic_poly(op: LinearDifferenceOperator, A: complex = 1) -> ComplexPoly:
    """``P(w) = sum_j a_j w^j - A``."""
    return op.characteristic_poly(A)


@dataclass(frozen=True)
class LinearDifferentialOperator:
    """``L_k[f] = b_k f^(k) + ... + b_1 f' + b_0`` where ``b_0`` is added, not multiplied."""

    diff_coeffs: tuple[complex, ...]  # b_1 .. b_k
    b0: complex = 0j

    def __post_init__(self):
        coeffs = tuple(complex(b) for b in self.diff_coeffs)
        if not coeffs:
            raise ValueError("need at least b_1")
        if coeffs[-1] == 0:
            raise ValueError("leading coefficient b_k must be nonzero")
        object.__setattr__(self, "diff_coeffs", coeffs)
        object.__setattr__(self, "b0", complex(self.b0))

    @property
    def order(self) -> int:
        return len(self.diff_coeffs)

    def apply(self, f: Expr) -> Expr:
        out: Expr = Const(self.b0) if self.b0 != 0 else ZERO
        for j, b in enumerate(self.diff_coeffs, start=1):
            if b != 0:
                out = add(out, mul(Const(b), nth_derivative(f, j)))
        return out

    def displayed_exponent_poly(self) -> ComplexPoly:
        """``b_k w^k + ... + b_1 w + b_0``, the exponent equation as usually displayed."""
        return ComplexPoly([self.b0, *self.diff_coeffs])

    def eigen_exponent_poly(self, A: complex = 1) -> ComplexPoly:
        """Exponents ``lam`` with ``L_k[e^(lam z)] = A e^(lam z)`` when ``b_0 = 0``."""
        return ComplexPoly([-complex(A), *self.diff_coeffs])

    def to_dict(self) -> dict:
        return {"diff_coeffs": [format_complex(b) for b in self.diff_coeffs], "b0": format_complex(self.b0)}


def apply_mixed(dop: LinearDifferenceOperator | None, lop: LinearDifferentialOperator | None, f: Expr) -> Expr:
    """``L(f) + L_k[f]``; either part may be omitted."""
    out: Expr = ZERO
    if dop is not None:
        out = add(out, dop.apply(f))
    if lop is not None:
        out = add(out, lop.apply(f))
    return out


# ----------------------------------------------------------------------------
# residuals


def residual(
    op: LinearDifferenceOperator,
    f: Expr,
    A: complex,
    samples=None,
    pole_radius: float = DEFAULT_POLE_RADIUS,
) -> ResidualReport:
    """Pointwise check of ``L(f) = A f``.

    The relative residual divides by ``|A f(z)|`` (floored at 1e-30).  With
    ``A = 0`` that quantity vanishes, so the scale ``sum_j |a_j f(z+jc)|`` is
    used instead; the report names the denominator it used.
    """
    zs = disk_samples() if samples is None else np.asarray(samples, dtype=complex)
    A = complex(A)
    vals, bad = _shifted_values(f, zs, [j * op.shift for j in range(op.order + 1)], pole_radius)
    vals = [np.nan_to_num(v) for v in vals]
    lhs = sum(a * v for a, v in zip(op.coeffs, vals))
    rhs = A * vals[0]
    absres = np.abs(lhs - rhs)
    if A != 0:
        scale, label = np.abs(rhs), "|A f(z)|"
    else:
        scale, label = sum(abs(a) * np.abs(v) for a, v in zip(op.coeffs, vals)), "sum_j |a_j f(z+jc)|"
    return _report(zs, absres, scale, bad, label)


def mixed_residual(
    dop: LinearDifferenceOperator | None,
    lop: LinearDifferentialOperator | None,
    f: Expr,
    A: complex = 1,
    samples=None,
    pole_radius: float = DEFAULT_POLE_RADIUS,
) -> ResidualReport:
    """Pointwise check of ``L(f) + L_k[f] = A f`` (``b_0`` enters additively)."""
    zs = disk_samples() if samples is None else np.asarray(samples, dtype=complex)
    lhs_expr = apply_mixed(dop, lop, f)
    lhs, bad_l = evaluate_many(lhs_expr, zs)
    fv, bad_f = evaluate_many(f, zs)
    bad = bad_l | bad_f | near_pole(lhs_expr, zs, pole_radius) | near_pole(f, zs, pole_radius)
    rhs = complex(A) * np.nan_to_num(fv)
    absres = np.abs(np.nan_to_num(lhs) - rhs)
    return _report(zs, absres, np.abs(rhs), bad, "|A f(z)|")


def estimate_eigenvalue(op: LinearDifferenceOperator, f: Expr, samples=None) -> tuple[complex, float]:
    """Estimate ``A`` from ``L(f)(z)/f(z)``.

    Returns the ratio at the first usable sample and the largest relative
    spread of the ratio over the remaining samples; a spread near machine
    precision means ``f`` really is an eigenfunction.
    """
    zs = disk_samples(24, 2.0) if samples is None else np.asarray(samples, dtype=complex)
    lf, bad_l = op.direct(f, zs)
    fv, bad_f = evaluate_many(f, zs)
    ok = ~(bad_l | bad_f) & (np.abs(np.nan_to_num(fv)) > 1e-8)
    if not np.any(ok):
        raise ResidualError("no sample where f is finite and nonzero")
    ratios = lf[ok] / fv[ok]
    A = complex(ratios[0])
    spread = float(np.max(np.abs(ratios - A)) / max(abs(A), RELATIVE_FLOOR))
    return A, spread


# ----------------------------------------------------------------------------
# recurrences with expression coefficients


@dataclass(frozen=True)
class ExprRecurrence:
    """``sum_j b_j(z) f(z + j*step) = b(z)`` with arbitrary expression coefficients."""

    coeffs: tuple[Expr, ...]
    rhs: Expr = ZERO
    step: complex = 1

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(as_expr(b) for b in self.coeffs))
        object.__setattr__(self, "rhs", as_expr(self.rhs))
        object.__setattr__(self, "step", complex(self.step))
        if len(self.coeffs) < 2:
            raise ValueError("a recurrence needs at least two coefficients")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def lhs(self, f: Expr) -> Expr:
        out: Expr = ZERO
        for j, b in enumerate(self.coeffs):
            out = add(out, mul(b, shift(f, j * self.step)))
        return out

    def residual(self, f: Expr, samples=None, pole_radius: float = DEFAULT_POLE_RADIUS) -> ResidualReport:
        """Relative residual against ``sum_j |b_j f(z+j*step)| + |b(z)|``.

        Scaling by the size of the individual terms makes the number mean
        "fraction of the terms that fails to cancel", which stays meaningful
        for homogeneous equations where there is no ``A f`` to compare with.
        """
        zs = disk_samples() if samples is None else np.asarray(samples, dtype=complex)
        vals, bad = _shifted_values(f, zs, [j * self.step for j in range(self.order + 1)], pole_radius)
        total = np.zeros(zs.shape, complex)
        scale = np.zeros(zs.shape)
        for b, v in zip(self.coeffs, vals):
            bv, bb = evaluate_many(b, zs)
            bad |= bb
            term = np.nan_to_num(bv) * np.nan_to_num(v)
            total += term
            scale += np.abs(term)
        rv, rb = evaluate_many(self.rhs, zs)
        bad |= rb
        rv = np.nan_to_num(rv)
        scale += np.abs(rv)
        return _report(zs, np.abs(total - rv), scale, bad, "sum_j |b_j f(z+j*step)| + |b(z)|")


def operator_from_dict(d: dict):
    """Difference operator, plus the differential part when present."""
    dop = LinearDifferenceOperator.from_dict(d)
    lop = None
    if "diff_coeffs" in d:
        lop = LinearDifferentialOperator(
            tuple(parse_complex(b) for b in d["diff_coeffs"]), parse_complex(d.get("b0", 0))
        )
    return dop, lop


def operator_to_dict(dop: LinearDifferenceOperator, lop: LinearDifferentialOperator | None = None) -> dict:
    d = dop.to_dict()
    if lop is not None:
        d.update(lop.to_dict())
    return d


def coefficient_list(values: Sequence) -> tuple[complex, ...]:
    return tuple(parse_complex(v) for v in values)
