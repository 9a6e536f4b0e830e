"""Simultaneous root finding (Aberth-Ehrlich) with multiplicity clustering.

Multiple roots come out of any floating-point iteration as a small ring of
approximations, of radius about ``eps**(1/m)``.  They are grouped by
overlapping inclusion disks, replaced by the cluster centroid (which is
well-conditioned), polished with Newton's method on ``p^(m-1)``, and the
multiplicity is only accepted after a derivative test.  Clusters that fail
the test are kept as separate roots and reported as near-degenerate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .poly import ComplexPoly

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Root:
    value: complex
    multiplicity: int


@dataclass
class RootSet:
    roots: list[Root]
    converged: bool = True
    iterations: int = 0
    diagnostics: list[str] = field(default_factory=list)

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    @property
    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    def values(self) -> list[complex]:
        return [r.value for r in self.roots]

    def sorted(self) -> RootSet:
        """Deterministic order: by modulus, then argument."""
        key = lambda r: (round(abs(r.value), 9), round(_arg(r.value), 9))
        return RootSet(sorted(self.roots, key=key), self.converged, self.iterations, list(self.diagnostics))


def _arg(w: complex) -> float:
    a = cmath.phase(w)
    return a + 2 * math.pi if a < 0 else a


def aberth(p: ComplexPoly, max_iter: int = 2000, tol: float = 4 * EPS):
    """Raw Aberth-Ehrlich approximations; returns ``(approx, iterations, converged)``."""
    n = p.degree
    a = p.coeffs
    if n == 1:
        return np.array([-a[0] / a[1]]), 0, True
    dp = p.derivative()
    center = -a[n - 1] / (n * a[n])
    # Fujiwara-style bound on |root - center| via the shifted polynomial's coefficients
    shifted = _taylor_shift(a, center)
    ratios = [abs(shifted[n - k] / shifted[n]) ** (1.0 / k) for k in range(1, n + 1) if shifted[n - k] != 0]
    radius = 2.0 * max(ratios) if ratios else 1.0
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    x = center + radius * np.exp(1j * angles)
    converged = False
    it = 0
    stalled = 0
    with np.errstate(all="ignore"):
        for it in range(1, max_iter + 1):
            px, dpx = p(x), dp(x)
            ratio = np.where(dpx != 0, px / np.where(dpx != 0, dpx, 1), 0)
            diff = x[:, None] - x[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            step = ratio / (1.0 - ratio * s)
            step = np.where(np.isfinite(step), step, 0)
            x = x - step
            small = np.abs(step) <= tol * np.maximum(np.abs(x), 1.0)
            at_noise = np.abs(p(x)) <= 16 * EPS * p.abs_eval(x)
            if np.all(small):
                converged = True
                break
            if np.all(small | at_noise):
                stalled += 1
                if stalled >= 20:
                    converged = True
                    break
            else:
                stalled = 0
    return x, it, converged


def _taylor_shift(a, c):
    b = np.array(a, dtype=complex)
    n = len(b)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            b[j] += c * b[j + 1]
    return b


def _inclusion_radii(p: ComplexPoly, x: np.ndarray) -> np.ndarray:
    """Weierstrass inclusion radii, inflated by the evaluation noise floor."""
    n = len(x)
    lead = p.coeffs[-1]
    radii = np.empty(n)
    for i in range(n):
        others = np.delete(x, i)
        denom = abs(lead) * np.prod(np.abs(x[i] - others)) if n > 1 else abs(lead)
        num = abs(p(x[i])) + 8 * EPS * float(p.abs_eval(x[i]))
        radii[i] = n * num / denom if denom > 0 else np.inf
    return radii


def _components(x, radii, cluster_tol):
    n = len(x)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(x[i] - x[j]) <= max(radii[i] + radii[j], cluster_tol):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _taylor_scale(p: ComplexPoly, w: complex, j: int) -> float:
    """Magnitude scale of the j-th Taylor coefficient p^(j)(w)/j!."""
    return float(sum(abs(c) * math.comb(k, j) * abs(w) ** (k - j) for k, c in enumerate(p.coeffs) if k >= j))


def confirm_multiplicity(p: ComplexPoly, w: complex, m: int, small: float = 1e-7, gap: float = 1e3) -> bool:
    """Check p^(j)(w) ~ 0 for j < m while p^(m)(w) stands clearly above that level.

    Coefficients are measured relative to their magnitude scale, so the test
    does not depend on how the polynomial is normalised.
    """
    rel = []
    for j in range(m + 1):
        tj = complex(p.derivative(j)(w)) / math.factorial(j)
        rel.append(abs(tj) / max(_taylor_scale(p, w, j), 1e-300))
    lower = max(rel[:m])
    return lower <= small and rel[m] >= max(gap * lower, 1e-12)


def _polish(p: ComplexPoly, w: complex, m: int, steps: int = 8) -> complex:
    q = p.derivative(m - 1)
    dq = q.derivative()
    for _ in range(steps):
        d = complex(dq(w))
        if d == 0:
            break
        step = complex(q(w)) / d
        if not cmath.isfinite(step):
            break
        w_new = w - step
        if abs(q(w_new)) > abs(q(w)):
            break
        w = w_new
        if abs(step) <= EPS * max(abs(w), 1.0):
            break
    return w


def roots(p: ComplexPoly, cluster_tol: float = 1e-6, max_iter: int = 2000) -> RootSet:
    """Roots of ``p`` with multiplicities; sum of multiplicities = degree."""
    if p.degree < 1:
        raise ValueError("roots need a polynomial of degree >= 1")
    coeffs = p.coeffs
    diagnostics: list[str] = []
    # exact zero roots first
    k0 = int(np.argmax(coeffs != 0))
    found: list[Root] = []
    if k0:
        found.append(Root(0j, k0))
        p = ComplexPoly(coeffs[k0:])
    if p.degree == 0:
        return RootSet(found).sorted()
    x, iters, converged = aberth(p, max_iter=max_iter)
    if not converged:
        diagnostics.append(f"aberth did not converge in {iters} iterations; roots are partial estimates")
    radii = _inclusion_radii(p, x)
    for group in _components(x, radii, cluster_tol):
        pts = x[group]
        m = len(group)
        if m == 1:
            found.append(Root(complex(_polish(p, complex(pts[0]), 1)), 1))
            continue
        centroid = complex(np.mean(pts))
        w = _polish(p, centroid, m)
        if confirm_multiplicity(p, w, m):
            found.append(Root(w, m))
        else:
            diagnostics.append(
                f"near-degenerate cluster of {m} roots near {centroid:.6g} failed the multiplicity test"
            )
            found.extend(Root(complex(_polish(p, complex(v), 1)), 1) for v in pts)
    return RootSet(found, converged, iters, diagnostics).sorted()
