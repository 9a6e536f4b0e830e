"""Numerical CM/IM value sharing inside a disk.

``f`` and ``g`` share ``a`` CM in ``|z| < r`` when the zeros of ``f - a`` and
``g - a`` there coincide with equal multiplicities, and IM when the zero sets
coincide ignoring multiplicity.  ``a = inf`` compares pole sets.  Verdicts
are local to the disk; nothing is claimed about the rest of the plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .expr import Expr, subtract_constant
from .serialize import format_complex
from .zeros import Zero, ZeroList, count_poles, count_zeros

INFINITY = "inf"


@dataclass(frozen=True)
class ZeroPair:
    f_zero: complex
    g_zero: complex
    distance: float
    f_mult: int
    g_mult: int


@dataclass
class SharingVerdict:
    value: str
    radius: float
    pairs: list[ZeroPair]
    unmatched_f: list[Zero]
    unmatched_g: list[Zero]
    diagnostics: list[str] = field(default_factory=list)

    @property
    def im(self) -> bool:
        return not self.unmatched_f and not self.unmatched_g

    @property
    def cm(self) -> bool:
        return self.im and all(p.f_mult == p.g_mult for p in self.pairs)

    def summary(self) -> str:
        return (
            f"value {self.value} in |z| < {self.radius:.6g}: "
            f"CM {'true' if self.cm else 'false'}, IM {'true' if self.im else 'false'} "
            f"({len(self.pairs)} pairs, {len(self.unmatched_f)}+{len(self.unmatched_g)} unmatched)"
        )

    def table(self) -> str:
        lines = [f"{'zero of f - a':>28}  {'zero of g - a':>28}  {'dist':>9}  mult"]
        for p in self.pairs:
            lines.append(
                f"{format_complex(p.f_zero):>28}  {format_complex(p.g_zero):>28}  {p.distance:9.2e}  {p.f_mult}/{p.g_mult}"
            )
        for z in self.unmatched_f:
            lines.append(f"{format_complex(z.location):>28}  {'-':>28}  {'':>9}  {z.multiplicity}/-")
        for z in self.unmatched_g:
            lines.append(f"{'-':>28}  {format_complex(z.location):>28}  {'':>9}  -/{z.multiplicity}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "radius": self.radius,
            "cm": self.cm,
            "im": self.im,
            "pairs": [
                {
                    "f_zero": format_complex(p.f_zero),
                    "g_zero": format_complex(p.g_zero),
                    "distance": p.distance,
                    "f_mult": p.f_mult,
                    "g_mult": p.g_mult,
                }
                for p in self.pairs
            ],
            "unmatched_f": [{"location": format_complex(z.location), "multiplicity": z.multiplicity} for z in self.unmatched_f],
            "unmatched_g": [{"location": format_complex(z.location), "multiplicity": z.multiplicity} for z in self.unmatched_g],
            "diagnostics": list(self.diagnostics),
        }


def _is_infinity(a) -> bool:
    if isinstance(a, str):
        return a.strip().lower() in ("inf", "infinity", "oo")
    return isinstance(a, float) and math.isinf(a)


def _points(e: Expr, a, r: float) -> ZeroList:
    if _is_infinity(a):
        return count_poles(e, r)
    return count_zeros(subtract_constant(e, complex(a)), r)


def _close_pairs(zs: list[Zero], tol) -> list[tuple[Zero, Zero]]:
    out = []
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            if abs(zs[i].location - zs[j].location) < 2 * tol(zs[i].location):
                out.append((zs[i], zs[j]))
    return out


def shares_value(f: Expr, g: Expr, a, r: float, pair_tol: float = 1e-6) -> SharingVerdict:
    """Pair the zeros of ``f - a`` and ``g - a`` (poles when ``a`` is infinite).

    Pairing is greedy by distance with tolerance ``pair_tol * max(1, |z|)``.
    Two zeros of the same function closer than twice that tolerance, or a
    zero with more than one partner in range, produce a diagnostic.
    """
    diagnostics: list[str] = []
    zf = _points(f, a, r)
    zg = _points(g, a, zf.radius)
    if zg.radius != zf.radius:
        zf = _points(f, a, zg.radius)
    radius = max(zf.radius, zg.radius)
    for name, zl in (("f", zf), ("g", zg)):
        diagnostics.extend(f"{name}: {d}" for d in zl.diagnostics)

    def tol(z: complex) -> float:
        return pair_tol * max(1.0, abs(z))

    for name, zl in (("f", zf), ("g", zg)):
        for p, q in _close_pairs(zl.zeros, tol):
            diagnostics.append(f"ambiguous: zeros of {name} at {format_complex(p.location)} and {format_complex(q.location)} nearly coincide")

    candidates = []
    for i, p in enumerate(zf.zeros):
        near = [j for j, q in enumerate(zg.zeros) if abs(p.location - q.location) <= tol(p.location)]
        if len(near) > 1:
            diagnostics.append(f"ambiguous pairing for zero of f at {format_complex(p.location)}: {len(near)} candidates")
        candidates.extend((abs(p.location - zg.zeros[j].location), i, j) for j in near)
    candidates.sort()
    used_f, used_g, pairs = set(), set(), []
    for d, i, j in candidates:
        if i in used_f or j in used_g:
            continue
        used_f.add(i)
        used_g.add(j)
        p, q = zf.zeros[i], zg.zeros[j]
        pairs.append(ZeroPair(p.location, q.location, d, p.multiplicity, q.multiplicity))
    pairs.sort(key=lambda p: (round(abs(p.f_zero), 9), round(math.atan2(p.f_zero.imag, p.f_zero.real), 9)))
    unmatched_f = [z for i, z in enumerate(zf.zeros) if i not in used_f]
    unmatched_g = [z for j, z in enumerate(zg.zeros) if j not in used_g]
    value = INFINITY if _is_infinity(a) else format_complex(complex(a))
    return SharingVerdict(value, radius, pairs, unmatched_f, unmatched_g, diagnostics)
