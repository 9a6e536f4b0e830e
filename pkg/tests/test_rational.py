import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from meroshift.linalg import solve_affine
from meroshift.operators import disk_samples
from meroshift.poly import RatPoly, integer_roots, lcm
from meroshift.rational import (
    PolynomialRecurrence,
    RationalFunction,
    dispersion,
    parse_poly,
    polynomial_solutions,
    rational_solutions,
    recurrence_from_coeffs,
    universal_denominator,
)

z = RatPoly.x()

SHIFTED_QUAD = recurrence_from_coeffs(["z^2-1", "(z+2)^2", "z+3"], "2*z^2+3*z+4")
TAN = ["-(z^2+1)", "z^2", "1"]


@pytest.mark.parametrize(
    "p, q, expected",
    [(z, z - 3, {3}), (z * z - 1, z, {1}), (z * z + 1, z, set()), (RatPoly([5]), z, set())],
)
def test_dispersion(p, q, expected):
    assert dispersion(p, q) == expected


def test_universal_denominator_example_52():
    u = universal_denominator(SHIFTED_QUAD)
    assert u.divrem(z + 1)[1].is_zero()


def test_universal_denominator_trivial_cases():
    assert universal_denominator(recurrence_from_coeffs(["z^2+1", "z^2+3"], "1")) == RatPoly([1])
    assert universal_denominator(recurrence_from_coeffs(["-1", "1"])) == RatPoly([1])


def test_example_52_exact():
    start = time.perf_counter()
    sol = rational_solutions(SHIFTED_QUAD)
    assert time.perf_counter() - start < 1.0
    assert sol.particular == RationalFunction(z, z + 1)
    assert sol.particular.to_text() == "z/(z + 1)"
    assert sol.basis == []
    assert sol.verified
    assert sol.certificates[0]["residual"] == []


@pytest.mark.parametrize(
    "coeffs, rhs, particular, basis",
    [
        (["-1", "1"], "1", z, [RatPoly([1])]),
        (["-2", "1"], "0", RatPoly(), []),
        (["-z", "1"], "0", RatPoly(), []),
        (["-1", "1"], "0", RatPoly(), [RatPoly([1])]),
    ],
)
def test_polynomial_solutions(coeffs, rhs, particular, basis):
    ps = polynomial_solutions(recurrence_from_coeffs(coeffs, rhs))
    assert ps.particular == particular
    assert ps.basis == basis


def test_inconsistent_polynomial_system():
    ps = polynomial_solutions(recurrence_from_coeffs(["z", "z"], "1"))
    assert not ps.consistent
    assert "no polynomial solution" in ps.diagnostics


def test_tan_homogeneous_rational_basis_is_constants():
    # constants satisfy f(z+2) + z^2 f(z+1) - (z^2+1) f(z) = 0, since 1 + z^2 - z^2 - 1 = 0
    sol = rational_solutions(recurrence_from_coeffs(TAN))
    assert [b.to_text() for b in sol.basis] == ["1"]
    assert sol.verified


def test_tan_inhomogeneous_has_z():
    sol = rational_solutions(recurrence_from_coeffs(TAN, "z^2+2"))
    assert sol.particular == RationalFunction(z, RatPoly([1]))


def test_one_over_z():
    sol = rational_solutions(recurrence_from_coeffs(["-z", "z+1"]))
    assert [b.to_text() for b in sol.basis] == ["1/z"]


def test_reduced_lowest_terms():
    f = RationalFunction.reduced(2 * z * (z - 1), 4 * (z - 1) * (z + 2))
    assert f.num == z.scale(Fraction(1, 2)) and f.den == z + 2


def test_recurrence_validation():
    with pytest.raises(ValueError):
        recurrence_from_coeffs(["0", "1"])
    with pytest.raises(ValueError):
        recurrence_from_coeffs(["1"])


def test_parse_poly_forms():
    assert parse_poly(["1/2", "0", "-3"]) == RatPoly([Fraction(1, 2), 0, -3])
    assert parse_poly("(z+1)^2/2") == RatPoly([Fraction(1, 2), 1, Fraction(1, 2)])


def test_json_round_trip():
    assert PolynomialRecurrence.from_dict(SHIFTED_QUAD.to_dict()) == SHIFTED_QUAD


# -- completeness against brute force -----------------------------------------


def _random_recurrence(rng, step=Fraction(1)):
    """b_j = q0(z + j*step) r_j(z), so f0 = p0/q0 solves it with a polynomial right side."""
    n = int(rng.integers(1, 3))
    roots0 = [int(t) for t in rng.integers(-3, 4, size=int(rng.integers(1, 3)))]
    q0 = RatPoly.from_roots(roots0)
    p0 = RatPoly([int(c) for c in rng.integers(-3, 4, size=int(rng.integers(1, 3)))])
    coeffs, rhs = [], RatPoly()
    for j in range(n + 1):
        r = RatPoly([int(c) for c in rng.integers(-2, 3, size=2)])
        if r.is_zero():
            r = RatPoly([1])
        coeffs.append(q0.shift(j * step) * r)
        rhs = rhs + r * p0.shift(j * step)
    return PolynomialRecurrence(tuple(coeffs), rhs, step), RationalFunction.reduced(p0, q0)


def _candidate_denominators(rec):
    n = rec.order
    roots = set()
    for i in range(4):
        roots.update(integer_roots(rec.coeffs[0].shift(-i)))
        roots.update(integer_roots(rec.coeffs[-1].shift(-n - i)))
    out = [RatPoly([1])]
    for k in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(sorted(roots), k):
            out.append(RatPoly.from_roots(combo))
    return out


def _solutions_with_denominator(rec, q, max_deg=3):
    shifted = [q.shift(j) for j in range(rec.order + 1)]
    M = RatPoly([1])
    for s in shifted:
        M = lcm(M, s)
    images = []
    for i in range(max_deg + 1):
        img = RatPoly()
        for j, (b, s) in enumerate(zip(rec.coeffs, shifted)):
            img = img + b * RatPoly.monomial(i).shift(j) * M.exact_div(s)
        images.append(img)
    target = rec.rhs * M
    rows = max([im.degree for im in images] + [target.degree]) + 1
    matrix = [[im[k] for im in images] for k in range(rows)]
    part, kernel = solve_affine(matrix, [target[k] for k in range(rows)], max_deg + 1)
    if part is None:
        return []
    p = RatPoly(part)
    return [RationalFunction.reduced(p, q)] + [RationalFunction.reduced(p + RatPoly(v), q) for v in kernel]


def _in_solution_set(f, sol):
    u = sol.universal_denominator
    def over_u(g):
        scaled, rem = (g.num * u).divrem(g.den)
        assert rem.is_zero(), "denominator does not divide the universal denominator"
        return scaled
    target = over_u(f) - (over_u(sol.particular) if sol.particular else RatPoly())
    cols = [over_u(b) for b in sol.basis]
    if not cols:
        return target.is_zero()
    rows = max([c.degree for c in cols] + [target.degree]) + 1
    part, _ = solve_affine([[c[k] for c in cols] for k in range(rows)], [target[k] for k in range(rows)], len(cols))
    return part is not None


def test_brute_force_completeness(rng):
    checked = 0
    for _ in range(20):
        rec, f0 = _random_recurrence(rng)
        sol = rational_solutions(rec)
        assert sol.verified
        assert sol.particular is not None and _in_solution_set(f0, sol)
        for q in _candidate_denominators(rec):
            for f in _solutions_with_denominator(rec, q):
                assert _in_solution_set(f, sol)
                checked += 1
    assert checked > 20


@pytest.mark.parametrize("step", [Fraction(1, 2), Fraction(3), Fraction(-2, 3)])
def test_step_normalisation_soundness(rng, step):
    for _ in range(4):
        rec, f0 = _random_recurrence(rng, step)
        sol = rational_solutions(rec)
        assert sol.transform is not None
        assert sol.verified
        assert _in_solution_set_scaled(f0, sol, step)
        zs = disk_samples(50, 5.0) + 0.123
        assert rec.to_expr_recurrence().residual(sol.particular.to_expr(), zs).max_rel < 1e-10
        hom = PolynomialRecurrence(rec.coeffs, RatPoly(), step).to_expr_recurrence()
        for b in sol.basis:
            assert hom.residual(b.to_expr(), zs).max_rel < 1e-10


def _in_solution_set_scaled(f0, sol, step):
    # the exact certificate already covers the returned functions; here the
    # planted solution must be reproduced as particular + kernel combination
    diff = RationalFunction.reduced(
        f0.num * sol.particular.den - sol.particular.num * f0.den, f0.den * sol.particular.den
    )
    if diff.is_zero():
        return True
    zs = np.array([0.31 + 0.2j, 1.7 - 0.4j, -2.2 + 1.1j, 0.05 + 3j])
    vals = np.array([complex(diff.num.to_complex()(w) / diff.den.to_complex()(w)) for w in zs])
    basis = np.array([[complex(b.num.to_complex()(w) / b.den.to_complex()(w)) for b in sol.basis] for w in zs])
    if basis.size == 0:
        return False
    coef, *_ = np.linalg.lstsq(basis, vals, rcond=None)
    return np.allclose(basis @ coef, vals, rtol=1e-9, atol=1e-12)
