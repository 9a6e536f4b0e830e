"""Desk-scale estimates of Nevanlinna functionals.

``m(r, f)`` is the circle mean of ``log+ |f|``, computed from log-magnitude
evaluation so that functions like ``exp(z^2)`` at ``r = 200`` stay finite.
``N(r, f)`` sums ``log(r/|p|)`` over the poles found by the argument
principle, ``T = m + N``, and orders are least-squares slopes over the upper
half of a geometric radius grid.

All limit statements of the theory hold only as ``r -> infinity`` outside
small exceptional sets, so these numbers are reports to be compared with
generous tolerances, not proofs.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .evaluate import log_abs
from .expr import ONE, Const, Expr, as_fraction, div, is_entire, nth_derivative, shift, subtract_constant
from .serialize import format_complex
from .zeros import ZeroList, count_poles, zero_count

BAD_NODE_LIMIT = 0.2
MAX_NODES = 8192
BOREL_MARGIN = 0.2
LOG_GROWTH_RTOL = 0.02
MONOTONE_SLACK = 0.05


class NevanlinnaError(RuntimeError):
    pass


@dataclass(frozen=True)
class RadialGrid:
    radii: tuple[float, ...]
    nodes: int = 512

    def __post_init__(self):
        r = tuple(float(x) for x in self.radii)
        if any(x <= 0 for x in r):
            raise ValueError("radii must be positive")
        if any(b <= a for a, b in zip(r, r[1:])):
            raise ValueError("radii must be strictly increasing")
        if self.nodes < 64:
            raise ValueError("need at least 64 quadrature nodes per circle")
        object.__setattr__(self, "radii", r)

    @classmethod
    def geometric(cls, r_min: float = 5.0, r_max: float = 200.0, count: int = 12, nodes: int = 512) -> RadialGrid:
        return cls(tuple(np.geomspace(r_min, r_max, count)), nodes)

    @property
    def r_max(self) -> float:
        return self.radii[-1]

    def upper_half(self) -> slice:
        return slice(len(self.radii) // 2, None)


DEFAULT_GRID = RadialGrid.geometric()


# ----------------------------------------------------------------------------
# m(r, f)


@dataclass(frozen=True)
class ProximityDetail:
    value: float
    nodes: int
    bad_fraction: float


def _circle_logplus(f: Expr, r: float, k: int) -> tuple[np.ndarray, np.ndarray]:
    theta = 2 * math.pi * (np.arange(k) + 0.5) / k
    L, bad = log_abs(f, r * np.exp(1j * theta))
    return np.maximum(np.where(bad, 0.0, L), 0.0), bad


def proximity_detail(f: Expr, r: float, nodes: int = 512, rtol: float = 1e-6) -> ProximityDetail:
    """Trapezoid mean of ``log+|f|`` on ``|z| = r`` with node doubling.

    Nodes that evaluate as poles or unrepresentable values are dropped; the
    node count doubles (up to 8192) until two successive means agree.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    if nodes < 64:
        raise ValueError("need at least 64 nodes")
    k = nodes
    prev = None
    while True:
        lp, bad = _circle_logplus(f, r, k)
        frac_bad = float(np.mean(bad))
        if frac_bad > BAD_NODE_LIMIT:
            raise NevanlinnaError(f"{frac_bad:.0%} of the nodes on |z|={r:g} hit poles or overflow")
        val = float(np.sum(lp[~bad]) / max(np.count_nonzero(~bad), 1))
        if prev is not None and abs(val - prev) <= rtol * (1.0 + abs(val)):
            return ProximityDetail(val, k, frac_bad)
        if k >= MAX_NODES:
            return ProximityDetail(val, k, frac_bad)
        prev = val
        k *= 2


def proximity(f: Expr, r: float, nodes: int = 512) -> float:
    """``m(r, f) = (1/2 pi) \\int log+ |f(r e^{it})| dt``."""
    return proximity_detail(f, r, nodes).value


# ----------------------------------------------------------------------------
# N(r, f)


def pole_list(f: Expr, r_max: float) -> ZeroList | None:
    """Poles of ``f`` in ``|z| < r_max`` (``None`` when ``f`` has none by construction)."""
    if is_entire(f):
        return None
    frac = as_fraction(f)
    if frac is not None and isinstance(frac[1], Const):
        return None
    return count_poles(f, r_max)


def counting_from_list(points: ZeroList | None, r: float) -> float:
    """``N(r) = sum_{0<|p|<r} log(r/|p|) + n(0) log r`` from a point list."""
    if points is None:
        return 0.0
    total = 0.0
    tiny = 1e-12 * max(1.0, r)
    for z in points.zeros:
        d = abs(z.location - points.center)
        if d < tiny:
            total += z.multiplicity * math.log(r)
        elif d < r:
            total += z.multiplicity * math.log(r / d)
    return total


def counting(f: Expr, r: float, pole_mode: bool = True) -> float:
    """``N(r, f)`` for poles, or ``N(r, 1/f)`` (zeros) with ``pole_mode=False``."""
    target = f if pole_mode else div(ONE, f)
    return counting_from_list(pole_list(target, r), r)


# ----------------------------------------------------------------------------
# T(r, f) and growth


@dataclass
class NevanlinnaReport:
    radii: list[float]
    m: list[float]
    N: list[float]
    T: list[float]
    order: float = float("nan")
    hyper_order: float = float("nan")
    raw_slope: float = float("nan")
    growth_model: str = ""
    log_degree: float | None = None
    deficiency: dict = field(default_factory=dict)
    lam: dict = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    @property
    def order_text(self) -> str:
        return "> 5" if self.order > 5 else f"{self.order:.6g}"

    def to_dict(self) -> dict:
        return {
            "radii": list(self.radii),
            "m": list(self.m),
            "N": list(self.N),
            "T": list(self.T),
            "order": self.order,
            "order_text": self.order_text,
            "hyper_order": self.hyper_order,
            "raw_slope": self.raw_slope,
            "growth_model": self.growth_model,
            "log_degree": self.log_degree,
            "deficiency": dict(self.deficiency),
            "lambda": dict(self.lam),
            "flags": list(self.flags),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "m", "N", "T"])
        for row in zip(self.radii, self.m, self.N, self.T):
            w.writerow(["%.12g" % x for x in row])
        return buf.getvalue()


def characteristic(f: Expr, grid: RadialGrid = DEFAULT_GRID, fit: bool = True) -> NevanlinnaReport:
    """``T(r, f) = m(r, f) + N(r, f)`` on every grid radius."""
    poles = pole_list(f, grid.r_max)
    ms, Ns = [], []
    for r in grid.radii:
        ms.append(proximity(f, r, grid.nodes))
        Ns.append(counting_from_list(poles, r))
    Ts = [a + b for a, b in zip(ms, Ns)]
    rep = NevanlinnaReport(list(grid.radii), ms, Ns, Ts)
    for i in range(1, len(Ts)):
        if Ts[i] < Ts[i - 1] * (1 - MONOTONE_SLACK) - 1e-9:
            rep.flags.append(f"T decreases by more than 5% between r={grid.radii[i-1]:.4g} and r={grid.radii[i]:.4g}")
    if poles is not None:
        rep.flags.extend(poles.diagnostics)
    if fit:
        estimate_order(rep)
    return rep


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.polyfit(x, y, 1)[0])


def estimate_order(report: NevanlinnaReport) -> tuple[float, float]:
    """Fill in ``order`` and ``hyper_order`` from the upper half of the grid.

    The order is the slope of ``log T`` against ``log r``.  That slope tends
    to 0 only like ``1/log r`` when ``T = d log r + O(1)`` (rational
    functions), so a logarithmic-growth test runs first: if ``T`` is fitted
    by ``alpha log r + beta`` to within 2% RMS, the order is 0 and
    ``alpha`` is kept as ``log_degree``.  The raw slope is always reported.
    """
    r = np.asarray(report.radii)
    T = np.asarray(report.T)
    if len(r) < 8:
        report.flags.append("fewer than 8 radii; slopes are unreliable")
    top = slice(len(r) // 2, None)
    x, t = np.log(r[top]), T[top]
    if np.all(np.abs(t - t[0]) <= 1e-12 * max(1.0, abs(t[0]))):
        report.order = report.hyper_order = report.raw_slope = 0.0
        report.growth_model = "constant"
        report.flags.append("degenerate fit: T constant on the upper grid")
        return 0.0, 0.0
    if np.any(t <= 0):
        report.flags.append("T vanishes on the upper grid; order set to 0")
        report.order = report.hyper_order = report.raw_slope = 0.0
        report.growth_model = "degenerate"
        return 0.0, 0.0
    report.raw_slope = _slope(x, np.log(t))
    A = np.vstack([x, np.ones_like(x)]).T
    (alpha, beta), *_ = np.linalg.lstsq(A, t, rcond=None)
    rms = float(np.sqrt(np.mean((A @ np.array([alpha, beta]) - t) ** 2)))
    if alpha > 0 and rms <= LOG_GROWTH_RTOL * float(np.mean(t)):
        report.order = 0.0
        report.growth_model = "logarithmic"
        report.log_degree = float(alpha)
    else:
        report.order = report.raw_slope
        report.growth_model = "power"
    ll = np.log(t)
    if np.all(ll > 0):
        report.hyper_order = max(_slope(x, np.log(ll)), 0.0)
    else:
        report.hyper_order = 0.0
        report.flags.append("log T <= 0 on the upper grid; hyper-order set to 0")
    return report.order, report.hyper_order


def order_estimate(f: Expr, grid: RadialGrid = DEFAULT_GRID) -> tuple[float, float]:
    rep = characteristic(f, grid)
    return rep.order, rep.hyper_order


# ----------------------------------------------------------------------------
# value distribution


def _reciprocal_shift(f: Expr, a: complex) -> Expr:
    return div(ONE, subtract_constant(f, a))


def deficiency(f: Expr, a, grid: RadialGrid = DEFAULT_GRID, report: NevanlinnaReport | None = None) -> float:
    """Median over the top three radii of ``m(r, 1/(f-a)) / T(r, f)``.

    ``a = inf`` (``math.inf`` or the string ``"inf"``) uses ``m(r, f)``.
    """
    rep = report if report is not None else characteristic(f, grid, fit=False)
    target = f if _is_infinity(a) else _reciprocal_shift(f, complex(a))
    ratios = []
    for r, T in zip(rep.radii[-3:], rep.T[-3:]):
        if T <= 1e-9:
            raise NevanlinnaError(f"T(r, f) ~ 0 at r={r:g}; deficiency undefined")
        ratios.append(proximity(target, r, grid.nodes) / T)
    val = float(np.median(ratios))
    rep.deficiency[_value_key(a)] = val
    return val


def _is_infinity(a) -> bool:
    return isinstance(a, str) and a.strip().lower() in ("inf", "infinity", "oo") or (
        isinstance(a, float) and math.isinf(a)
    )


def _value_key(a) -> str:
    return "inf" if _is_infinity(a) else format_complex(complex(a))


@dataclass
class BorelEstimate:
    value: str
    lam: float
    order: float
    verdict: str
    counts: list[int]
    radii: list[float]
    flags: list[str] = field(default_factory=list)

    @property
    def exceptional(self) -> bool:
        return self.verdict == "Borel-exceptional candidate"

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "lambda": self.lam,
            "order": self.order,
            "verdict": self.verdict,
            "counts": list(self.counts),
            "radii": list(self.radii),
            "flags": list(self.flags),
        }


def borel_estimate(
    f: Expr, a, grid: RadialGrid = DEFAULT_GRID, report: NevanlinnaReport | None = None
) -> BorelEstimate:
    """Compare the zero-count exponent of ``f - a`` with the order of ``f``.

    ``lambda`` is the slope of ``log n(r)`` against ``log r`` over the upper
    half of the grid, where ``n(r)`` counts zeros of ``f - a`` in ``|z| < r``.
    The verdict is "Borel-exceptional candidate" when ``lambda < order - 0.2``.
    """
    rep = report if report is not None else characteristic(f, grid)
    g = subtract_constant(f, complex(a))
    counts = [zero_count(g, r)[0] for r in grid.radii]
    flags = []
    top = grid.upper_half()
    r_top = np.asarray(grid.radii[top])
    n_top = np.asarray(counts[top], dtype=float)
    if np.all(n_top == 0):
        lam = 0.0
        flags.append("no zeros of f - a on the upper grid; lambda set to 0")
    else:
        keep = n_top > 0
        if np.count_nonzero(keep) < 2:
            lam = 0.0
            flags.append("fewer than two radii with zeros; lambda set to 0")
        else:
            lam = max(_slope(np.log(r_top[keep]), np.log(n_top[keep])), 0.0)
    verdict = "Borel-exceptional candidate" if lam < rep.order - BOREL_MARGIN else "not exceptional"
    key = _value_key(a)
    rep.lam[key] = lam
    return BorelEstimate(key, lam, rep.order, verdict, counts, list(grid.radii), flags)


# ----------------------------------------------------------------------------
# lemma-style quantities


def ratio_expr(f: Expr, eta1: complex, eta2: complex, k: int) -> Expr:
    """``f^(k)(z + eta1) / f(z + eta2)``."""
    return div(nth_derivative(shift(f, complex(eta1)), k), shift(f, complex(eta2)))


def ratio_proximity(f: Expr, eta1: complex, eta2: complex, k: int, r: float, nodes: int = 512) -> float:
    """``m(r, f^(k)(z+eta1) / f(z+eta2))``."""
    return proximity(ratio_expr(f, eta1, eta2, k), r, nodes)


def shift_log_ratio_range(f: Expr, eta: complex, r: float, nodes: int = 512) -> tuple[float, float]:
    """Range of ``log|f(z+eta)/f(z)|`` over ``|z| = r``."""
    theta = 2 * math.pi * (np.arange(nodes) + 0.5) / nodes
    zs = r * np.exp(1j * theta)
    L1, b1 = log_abs(shift(f, complex(eta)), zs)
    L0, b0 = log_abs(f, zs)
    ok = ~(b0 | b1)
    d = (L1 - L0)[ok]
    return float(np.min(d)), float(np.max(d))


def characteristic_at(f: Expr, r: float, nodes: int = 512) -> float:
    """``T(r, f)`` at a single radius."""
    return proximity(f, r, nodes) + counting(f, r)
