"""Zero and pole counting by the argument principle.

For an entire ``F`` the winding number ``(1/2 pi i) \\oint F'/F dz`` over a
closed contour counts zeros inside it.  The disk's bounding box is split
recursively; each child box gets its own winding number, boxes with winding
0 are dropped, and the split is retried at a different cut whenever the
child windings fail to be near-integers or fail to add up to the parent's.
A box whose zeros have collapsed to one point (second moment ~ 0) becomes a
multiple zero.  Locations are polished with Newton's method and each
multiplicity is re-read from a winding number on a small circle.

Meromorphic expressions are split into numerator/denominator first, so zeros
and poles never cancel inside a winding number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .evaluate import log_evaluate
from .expr import ONE, Const, Expr, as_fraction, derivative, div

GUARD = 0.1  # max distance of a winding number from the nearest integer
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_SPLITS = ((0.5123, 0.4877), (0.4711, 0.5379), (0.5531, 0.4467), (0.4389, 0.5617))


class ZeroCountError(RuntimeError):
    """Winding numbers could not be resolved to integers."""

    def __init__(self, message: str, box=None):
        self.box = box
        super().__init__(message)


@dataclass(frozen=True)
class Zero:
    location: complex
    multiplicity: int


@dataclass
class ZeroList:
    """Zeros of an expression inside ``|z - center| < radius``."""

    zeros: list[Zero]
    radius: float
    center: complex = 0j
    outer_winding: int = 0
    box_winding: int = 0
    leaf_windings: list[int] = field(default_factory=list)
    requested_radius: float | None = None
    diagnostics: list[str] = field(default_factory=list)

    def __iter__(self):
        return iter(self.zeros)

    def __len__(self):
        return len(self.zeros)

    @property
    def total(self) -> int:
        return sum(z.multiplicity for z in self.zeros)

    @property
    def nudged(self) -> bool:
        return self.requested_radius is not None and self.requested_radius != self.radius

    def count_within(self, t: float) -> int:
        return sum(z.multiplicity for z in self.zeros if abs(z.location - self.center) < t)

    def to_dict(self) -> dict:
        from .serialize import format_complex

        return {
            "radius": self.radius,
            "center": format_complex(self.center),
            "zeros": [{"location": format_complex(z.location), "multiplicity": z.multiplicity} for z in self.zeros],
            "outer_winding": self.outer_winding,
            "box_winding": self.box_winding,
            "leaf_windings": list(self.leaf_windings),
            "diagnostics": list(self.diagnostics),
        }


# ----------------------------------------------------------------------------
# logarithmic derivative


class _LogDerivative:
    """``F'/F`` evaluated in log-magnitude form so huge values do not overflow."""

    def __init__(self, F: Expr):
        self.F = F
        self.dF = derivative(F)

    def __call__(self, zs: np.ndarray):
        L0, u0, b0 = log_evaluate(self.F, zs)
        L1, u1, b1 = log_evaluate(self.dF, zs)
        with np.errstate(all="ignore"):
            g = np.exp(L1 - L0) * (u1 / u0)
        g = np.where(np.isneginf(L1) & ~np.isneginf(L0), 0j, g)
        bad = b0 | b1 | np.isneginf(L0) | ~np.isfinite(g)
        return g, bad

    def newton_distance(self, zs: np.ndarray) -> np.ndarray:
        """``|F/F'|``, an estimate of the distance to the nearest zero."""
        g, bad = self(zs)
        with np.errstate(divide="ignore"):
            d = 1.0 / np.abs(g)
        return np.where(bad, 0.0, d)

    def values(self, zs):
        L0, u0, b0 = log_evaluate(self.F, zs)
        return L0, u0, b0


# ----------------------------------------------------------------------------
# contour integrals


def _segment_moments(g: _LogDerivative, a: complex, b: complex, tol: float, depth: int = 0):
    """``\\int_a^b g(z) [1, z, z^2] dz`` by adaptive Gauss-Legendre."""
    stack = [(a, b, 0)]
    total = np.zeros(3, complex)
    while stack:
        a0, b0, d = stack.pop()
        mid, half = (a0 + b0) / 2, (b0 - a0) / 2
        whole = _gl(g, mid, half)
        left = _gl(g, (a0 + mid) / 2, half / 2)
        right = _gl(g, (mid + b0) / 2, half / 2)
        if whole is None or left is None or right is None:
            raise ZeroCountError(f"zero on contour segment near {mid:.6g}")
        refined = left + right
        err = abs(refined[0] - whole[0])
        if err <= tol + 1e-10 * abs(refined[0]) or d >= 40:
            if d >= 40 and err > 1e-3:
                raise ZeroCountError(f"quadrature did not settle near {mid:.6g}")
            total += refined
        else:
            stack.append((a0, mid, d + 1))
            stack.append((mid, b0, d + 1))
    return total


def _gl(g: _LogDerivative, mid: complex, half: complex):
    zs = mid + half * _GL_X
    v, bad = g(zs)
    if np.any(bad):
        return None
    w = _GL_W * half * v
    return np.array([w.sum(), (w * zs).sum(), (w * zs * zs).sum()])


def box_moments(g: _LogDerivative, x0: float, x1: float, y0: float, y1: float, tol: float = 1e-9):
    """Winding moments ``(1/2 pi i) \\oint g(z) z^k dz`` around a box, k = 0, 1, 2."""
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    total = np.zeros(3, complex)
    for k in range(4):
        total += _segment_moments(g, corners[k], corners[(k + 1) % 4], tol)
    return total / (2j * math.pi)


def circle_winding(g: _LogDerivative, center: complex, radius: float, n0: int = 256, n_max: int = 1 << 16):
    """Winding number around a circle by the trapezoid rule with doubling."""
    n = n0
    prev = None
    while n <= n_max:
        theta = 2 * math.pi * np.arange(n) / n
        e = np.exp(1j * theta)
        zs = center + radius * e
        v, bad = g(zs)
        if np.any(bad):
            raise ZeroCountError(f"zero or singularity on the circle |z - {center}| = {radius}")
        val = complex(np.mean(v * radius * e))  # (1/2 pi i) * sum g dz
        if prev is not None and abs(val - prev) < 1e-8 * max(1.0, abs(val)):
            return val
        prev = val
        n *= 2
    return prev


def _as_integer(w: complex, what: str, box=None) -> int:
    k = round(w.real)
    if abs(w.real - k) > GUARD or abs(w.imag) > GUARD:
        raise ZeroCountError(f"non-integer winding {w:.4g} on {what}", box)
    return int(k)


def _near_contour(g: _LogDerivative, center: complex, radius: float, n: int = 512) -> bool:
    theta = 2 * math.pi * np.arange(n) / n
    zs = center + radius * np.exp(1j * theta)
    d = g.newton_distance(zs)
    # a zero within ~1e-6 of the circle shows up as a tiny Newton step
    return bool(np.min(d) < max(1e-6, 1e-6 * radius) * 4)


# ----------------------------------------------------------------------------
# entire case


def _polish(g: _LogDerivative, z: complex, m: int, steps: int = 30) -> complex:
    """Modified Newton ``z -= m F/F'``, keeping the iterate with the smallest ``|F|``.

    Near a multiple zero the iteration reaches the rounding-noise floor and
    then wanders; accepting only improving steps stops it there.
    """
    best_L = g.values(np.array([z]))[0][0]
    for _ in range(steps):
        v, bad = g(np.array([z]))
        if bad[0] or v[0] == 0:
            break
        step = m / complex(v[0])
        if not np.isfinite(step):
            break
        z_new = z - step
        L_new = g.values(np.array([z_new]))[0][0]
        if not L_new < best_L:
            break
        z, best_L = z_new, L_new
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    return z


def _find_entire_zeros(
    g: _LogDerivative,
    center: complex,
    radius: float,
    min_box: float,
    diagnostics: list[str],
):
    half = radius * 1.0001
    x0, x1 = center.real - half, center.real + half
    y0, y1 = center.imag - half, center.imag + half
    # move the root box off any zero sitting on its boundary
    for shift in (0.0, 0.0131, 0.0277, 0.0419):
        dx = shift * half
        try:
            root = box_moments(g, x0 - dx, x1 + dx, y0 - dx, y1 + dx)
            x0, x1, y0, y1 = x0 - dx, x1 + dx, y0 - dx, y1 + dx
            break
        except ZeroCountError:
            continue
    else:
        raise ZeroCountError("could not place the bounding box away from zeros")
    box_winding = _as_integer(root[0], "bounding box")
    leaves: list[tuple[tuple[float, float, float, float], int, np.ndarray]] = []
    todo = [((x0, x1, y0, y1), box_winding, root)]
    while todo:
        box, w, mom = todo.pop()
        if w == 0:
            continue
        bx0, bx1, by0, by1 = box
        size = max(bx1 - bx0, by1 - by0)
        if w == 1 or size < min_box or _collapsed(mom, w, size):
            leaves.append((box, w, mom))
            continue
        children = _split(g, box, w)
        if children is None:
            diagnostics.append(f"could not split box {box} consistently; kept as one cluster of {w}")
            leaves.append((box, w, mom))
            continue
        todo.extend(children)
    return box_winding, leaves


def _collapsed(mom: np.ndarray, w: int, size: float) -> bool:
    mean = mom[1] / w
    var = mom[2] / w - mean * mean
    return abs(var) ** 0.5 < 1e-4 * size


def _split(g: _LogDerivative, box, parent: int):
    x0, x1, y0, y1 = box
    for fx, fy in _SPLITS:
        xm, ym = x0 + fx * (x1 - x0), y0 + fy * (y1 - y0)
        kids = [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]
        try:
            moms = [box_moments(g, *k) for k in kids]
            ws = [_as_integer(m[0], f"box {k}", k) for m, k in zip(moms, kids)]
        except ZeroCountError:
            continue
        if sum(ws) == parent:
            return list(zip(kids, ws, moms))
    return None


def _locate(g: _LogDerivative, leaves, diagnostics):
    found: list[tuple[complex, int, tuple]] = []
    for box, w, mom in leaves:
        z0 = complex(mom[1] / w)
        found.append((_polish(g, z0, w), w, box))
    zeros: list[Zero] = []
    for i, (z, w, box) in enumerate(found):
        others = [abs(z - o) for j, (o, _, _) in enumerate(found) if j != i]
        bsize = max(box[1] - box[0], box[3] - box[2])
        rho = min([bsize / 2] + [d / 3 for d in others if d > 0])
        rho = max(rho, 1e-9 * max(1.0, abs(z)))
        try:
            m = _as_integer(circle_winding(g, z, rho), f"small circle at {z:.6g}")
        except ZeroCountError as exc:
            diagnostics.append(f"multiplicity check failed at {z:.6g} ({exc}); using box winding {w}")
            m = w
        if m != w:
            diagnostics.append(f"zero near {z:.6g}: box winding {w}, small-circle winding {m}")
        if m > 0:
            zeros.append(Zero(z, m))
    return zeros


def entire_zeros(
    F: Expr, radius: float, center: complex = 0j, min_box: float | None = None, nudge: bool = True
) -> ZeroList:
    """Zeros of an entire expression in ``|z - center| < radius``."""
    g = _LogDerivative(F)
    diagnostics: list[str] = []
    requested = radius
    outer = None
    for k in range(12 if nudge else 1):
        radius = requested * (1 + 1e-4 * k)
        try:
            if nudge and _near_contour(g, center, radius):
                raise ZeroCountError("zero close to the circle")
            outer = _as_integer(circle_winding(g, center, radius), "outer circle")
            break
        except ZeroCountError:
            continue
    if outer is None:
        raise ZeroCountError(f"no usable circle near radius {requested:g}")
    if radius != requested:
        diagnostics.append(f"zero close to |z|={requested:g}; radius nudged to {radius:.8g}")
    if outer == 0 and F == Const(0):
        raise ZeroCountError("expression is identically zero")
    min_box = min_box if min_box is not None else 1e-7 * max(radius, 1.0)
    box_w, leaves = _find_entire_zeros(g, center, radius, min_box, diagnostics)
    zeros = [z for z in _locate(g, leaves, diagnostics)]
    inside = [z for z in zeros if abs(z.location - center) < radius]
    inside.sort(key=lambda z: (round(abs(z.location - center), 9), round(math.atan2(z.location.imag, z.location.real), 9)))
    total_inside = sum(z.multiplicity for z in inside)
    if total_inside != outer:
        diagnostics.append(f"zeros found inside ({total_inside}) differ from outer winding ({outer})")
    return ZeroList(inside, radius, center, outer, box_w, [w for _, w, _ in leaves], requested, diagnostics)


# ----------------------------------------------------------------------------
# public entry points


def _small_winding(F: Expr, z: complex, rho: float) -> int:
    return _as_integer(circle_winding(_LogDerivative(F), z, rho), f"small circle at {z:.6g}")


def _cancel(numer_zeros: ZeroList, den: Expr, diagnostics: list[str]) -> list[Zero]:
    """Subtract multiplicities of common zeros of the denominator."""
    if isinstance(den, Const):
        return list(numer_zeros.zeros)
    out = []
    locs = [z.location for z in numer_zeros.zeros]
    for i, z in enumerate(numer_zeros.zeros):
        gaps = [abs(z.location - o) for j, o in enumerate(locs) if j != i]
        rho = min([1e-3 * max(1.0, numer_zeros.radius)] + [d / 3 for d in gaps if d > 0])
        try:
            md = _small_winding(den, z.location, rho)
        except ZeroCountError:
            md = 0
            diagnostics.append(f"denominator check failed at {z.location:.6g}")
        if z.multiplicity - md > 0:
            out.append(Zero(z.location, z.multiplicity - md))
    return out


def count_zeros(f: Expr, radius: float, center: complex = 0j, min_box: float | None = None) -> ZeroList:
    """Zeros of ``f`` (with multiplicity) in ``|z - center| < radius``.

    Meromorphic ``f`` is written as ``N/D``; zeros of ``N`` shared with ``D``
    are cancelled.  When no such split exists the winding numbers count
    zeros minus poles and a diagnostic says so.
    """
    frac = as_fraction(f)
    if frac is None:
        zl = entire_zeros(f, radius, center, min_box)
        zl.diagnostics.append("no numerator/denominator split: windings count zeros minus poles")
        return zl
    num, den = frac
    zl = entire_zeros(num, radius, center, min_box)
    zl.zeros = _cancel(zl, den, zl.diagnostics)
    return zl


def count_poles(f: Expr, radius: float, center: complex = 0j, min_box: float | None = None) -> ZeroList:
    """Poles of ``f`` in the disk, as zeros of ``1/f``."""
    return count_zeros(div(ONE, f), radius, center, min_box)


def winding_number(f: Expr, radius: float, center: complex = 0j) -> int:
    """Winding of ``f`` around 0 along the circle (zeros minus poles inside)."""
    return _as_integer(circle_winding(_LogDerivative(f), center, radius), "circle")


def zero_count(f: Expr, radius: float, center: complex = 0j) -> tuple[int, float]:
    """Number of zeros in the disk without locating them.

    Entire expressions (and numerators of fractions with a constant
    denominator) only need the outer winding number; anything else falls
    back to :func:`count_zeros`.  Returns ``(count, radius_used)``.
    """
    frac = as_fraction(f)
    if frac is not None and isinstance(frac[1], Const):
        g = _LogDerivative(frac[0])
        for k in range(12):
            r = radius * (1 + 1e-4 * k)
            try:
                if _near_contour(g, center, r):
                    continue
                return _as_integer(circle_winding(g, center, r), "outer circle"), r
            except ZeroCountError:
                continue
        raise ZeroCountError(f"no usable circle near radius {radius:g}")
    zl = count_zeros(f, radius, center)
    return zl.total, zl.radius
