"""Numerical evaluation of expression trees.

Two evaluators share the node semantics:

* :func:`evaluate_many` works in ordinary complex doubles and flags poles
  (a denominator below ``POLE_EPS`` in magnitude) and overflow (a magnitude
  above ``OVERFLOW_CAP``) instead of propagating NaN.
* :func:`log_evaluate` carries ``(log|value|, phase)`` pairs so functions such
  as ``exp(z**2)`` can be measured on circles where the value itself does not
  fit in a double.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import special
from .expr import Add, Call, Const, Div, Expr, Mul, Neg, Polygamma, Pow, Sub, Var, integer_value

POLE_EPS = 1e-12
OVERFLOW_CAP = 1e300
_LOG_LINEAR_MAX = 690.0


@dataclass(frozen=True)
class EvalOutcome:
    value: complex
    pole: bool = False
    overflow: bool = False

    @property
    def ok(self) -> bool:
        return not (self.pole or self.overflow)


def evaluate(e: Expr, z) -> EvalOutcome:
    """Evaluate at a single point."""
    vals, pole, over = _eval(e, np.asarray([complex(z)]))
    v = complex(vals[0])
    return EvalOutcome(v, bool(pole[0]), bool(over[0]))


def evaluate_many(e: Expr, zs) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised evaluation.

    Returns ``(values, bad)``; ``values`` is NaN wherever ``bad`` is set
    (pole or overflow).
    """
    zs = np.asarray(zs, dtype=complex)
    vals, pole, over = _eval(e, zs.ravel())
    bad = pole | over
    vals = np.where(bad, np.nan + 0j, vals)
    return vals.reshape(zs.shape), bad.reshape(zs.shape)


def _finish(val, pole, over):
    with np.errstate(invalid="ignore"):
        mag = np.abs(val)
    nonfinite = ~np.isfinite(mag)
    over = over | nonfinite | (mag > OVERFLOW_CAP)
    return val, pole, over


def _eval(e: Expr, zs: np.ndarray):
    n = zs.shape
    with np.errstate(all="ignore"):
        if isinstance(e, Const):
            return np.full(n, e.value, dtype=complex), np.zeros(n, bool), np.zeros(n, bool)
        if isinstance(e, Var):
            return zs.astype(complex), np.zeros(n, bool), np.zeros(n, bool)
        if isinstance(e, (Add, Sub, Mul, Div)):
            a, pa, oa = _eval(e.left, zs)
            b, pb, ob = _eval(e.right, zs)
            pole, over = pa | pb, oa | ob
            if isinstance(e, Add):
                val = a + b
            elif isinstance(e, Sub):
                val = a - b
            elif isinstance(e, Mul):
                val = a * b
            else:
                small = np.abs(b) < POLE_EPS
                pole = pole | small
                val = a / np.where(small, 1.0, b)
            return _finish(val, pole, over)
        if isinstance(e, Neg):
            a, pa, oa = _eval(e.arg, zs)
            return -a, pa, oa
        if isinstance(e, Pow):
            b, pb, ob = _eval(e.base, zs)
            nexp = integer_value(e.exponent)
            if nexp is not None:
                if nexp < 0:
                    small = np.abs(b) < POLE_EPS
                    pb = pb | small
                    b = np.where(small, 1.0, b)
                return _finish(b ** nexp, pb, ob)
            x, px, ox = _eval(e.exponent, zs)
            if isinstance(e.base, Const):
                # same logarithm as expr.principal_power, so both spellings agree bit for bit
                if e.base.value == 0:
                    return _finish(np.zeros(n, complex), np.ones(n, bool), ox)
                return _finish(np.exp(x * cmath.log(e.base.value)), px, ox)
            zero = b == 0
            val = np.exp(x * np.log(np.where(zero, 1.0, b)))
            return _finish(val, pb | px | zero, ob | ox)
        if isinstance(e, Call):
            a, pa, oa = _eval(e.arg, zs)
            fn = e.fn
            if fn == "exp":
                val = np.exp(a)
            elif fn == "log":
                zero = a == 0
                pa = pa | zero
                val = np.log(np.where(zero, 1.0, a))
            elif fn == "sin":
                val = np.sin(a)
            elif fn == "cos":
                val = np.cos(a)
            elif fn == "tan":
                small = np.abs(np.cos(a)) < POLE_EPS
                pa = pa | small
                val = np.where(small, 0, np.tan(a))
            else:
                val, gp = special.gamma(a)
                pa = pa | gp
            return _finish(val, pa, oa)
        if isinstance(e, Polygamma):
            a, pa, oa = _eval(e.arg, zs)
            val, gp = special.polygamma(e.order, a)
            return _finish(val, pa | gp, oa)
    raise TypeError(type(e).__name__)


# ----------------------------------------------------------------------------
# log-magnitude evaluation


def log_evaluate(e: Expr, zs) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate as ``value = exp(logmag) * phase``.

    Returns ``(logmag, phase, bad)``.  A zero value has ``logmag = -inf``.
    ``bad`` marks poles and points where an intermediate argument itself is
    too large to handle (e.g. ``exp(exp(exp(z)))``).  Magnitudes are kept as
    logarithms, so a tiny denominator such as ``exp(-200)`` is legitimate
    here; only exact zeros count as poles.
    """
    zs = np.asarray(zs, dtype=complex)
    L, u, bad = _leval(e, zs.ravel())
    return L.reshape(zs.shape), u.reshape(zs.shape), bad.reshape(zs.shape)


def log_abs(e: Expr, zs) -> tuple[np.ndarray, np.ndarray]:
    """``log|e(z)|`` together with the bad-point mask."""
    L, _, bad = log_evaluate(e, zs)
    return L, bad


def _from_complex(v):
    mag = np.abs(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        L = np.log(mag)
        u = np.where(mag > 0, v / np.where(mag > 0, mag, 1.0), 1.0 + 0j)
    return L, u


def _to_complex(L, u):
    """Linear value; flags entries whose magnitude does not fit."""
    too_big = L > _LOG_LINEAR_MAX
    with np.errstate(all="ignore"):
        v = np.exp(np.where(too_big, 0.0, L)) * u
    return v, too_big | np.isnan(L)


def _leval(e: Expr, zs: np.ndarray):
    n = zs.shape
    with np.errstate(all="ignore"):
        if isinstance(e, Const):
            L, u = _from_complex(np.full(n, e.value, dtype=complex))
            return L, u, np.zeros(n, bool)
        if isinstance(e, Var):
            L, u = _from_complex(zs.astype(complex))
            return L, u, np.zeros(n, bool)
        if isinstance(e, (Mul, Div)):
            La, ua, ba = _leval(e.left, zs)
            Lb, ub, bb = _leval(e.right, zs)
            bad = ba | bb
            if isinstance(e, Mul):
                L = La + Lb
                # 0 * inf does not arise: magnitudes are finite logs
                L = np.where(np.isneginf(La) | np.isneginf(Lb), -np.inf, L)
                return L, ua * ub, bad
            pole = np.isneginf(Lb)
            L = np.where(pole, 0.0, La - Lb)
            return L, ua / ub, bad | pole
        if isinstance(e, (Add, Sub)):
            La, ua, ba = _leval(e.left, zs)
            Lb, ub, bb = _leval(e.right, zs)
            if isinstance(e, Sub):
                ub = -ub
            M = np.maximum(La, Lb)
            Mf = np.where(np.isneginf(M), 0.0, M)
            s = ua * np.exp(La - Mf) + ub * np.exp(Lb - Mf)
            Ls, us = _from_complex(s)
            L = np.where(np.isneginf(M), -np.inf, Mf + Ls)
            return L, us, ba | bb
        if isinstance(e, Neg):
            L, u, b = _leval(e.arg, zs)
            return L, -u, b
        if isinstance(e, Pow):
            Lb, ub, bb = _leval(e.base, zs)
            nexp = integer_value(e.exponent)
            if nexp is not None:
                pole = np.isneginf(Lb) if nexp < 0 else np.zeros(n, bool)
                L = np.where(pole, 0.0, nexp * Lb)
                if nexp > 0:
                    L = np.where(np.isneginf(Lb), -np.inf, L)
                return L, ub**nexp, bb | pole
            xv, xbad = _linear_of(e.exponent, zs)
            zero = np.isneginf(Lb)
            logb = np.where(zero, 0.0, Lb) + 1j * np.angle(ub)
            return _exp_of(xv * logb, bb | xbad | zero)
        if isinstance(e, Call):
            if e.fn in ("sin", "cos", "tan", "exp"):
                a, abad = _linear_of(e.arg, zs)
                if e.fn == "exp":
                    return _exp_of(a, abad)
                if e.fn == "sin":
                    return _exp_of(special.log_sin(a), abad)
                if e.fn == "cos":
                    return _exp_of(special.log_cos(a), abad)
                ls, lc = special.log_sin(a), special.log_cos(a)
                pole = np.isneginf(lc.real)
                L, u, b = _exp_of(ls - np.where(pole, 0.0, lc), abad)
                return L, u, b | pole
            if e.fn == "log":
                La, ua, ba = _leval(e.arg, zs)
                zero = np.isneginf(La)
                v = np.where(zero, 0.0, La) + 1j * np.angle(ua)
                L, u = _from_complex(v)
                return L, u, ba | zero
            a, abad = _linear_of(e.arg, zs)
            lg, pole = special.loggamma(a)
            L, u, b = _exp_of(lg, abad)
            return L, u, b | pole
        if isinstance(e, Polygamma):
            a, abad = _linear_of(e.arg, zs)
            v, pole = special.polygamma(e.order, a)
            L, u = _from_complex(v)
            return L, u, abad | pole | ~np.isfinite(v)
    raise TypeError(type(e).__name__)


def _linear_of(e: Expr, zs):
    L, u, bad = _leval(e, zs)
    v, big = _to_complex(L, u)
    return v, bad | big


def _exp_of(w, bad):
    """Log-form of ``exp(w)`` for complex ``w``."""
    bad = bad | ~np.isfinite(w)
    w = np.where(bad, 0.0, w)
    L = w.real
    u = np.exp(1j * w.imag)
    return L, u, bad

