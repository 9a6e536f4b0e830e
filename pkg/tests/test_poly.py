from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from meroshift.linalg import rank, solve_affine
from meroshift.poly import RatPoly, gcd, integer_roots, interpolate, lcm, resultant

z = RatPoly.x()


def P(*coeffs):
    return RatPoly(coeffs)


def test_gcd_example():
    assert gcd(z * z - 1, z + 1) == z + 1


def test_shift_by_integer_example():
    assert (z * z).shift_by_integer(1) == P(1, 2, 1)


def test_divrem_example():
    assert (z * z + 3 * z + 2).divrem(z + 1) == (z + 2, RatPoly())


def test_division_by_zero_polynomial():
    with pytest.raises(ZeroDivisionError):
        z.divrem(RatPoly())


@pytest.mark.parametrize(
    "p, q, expected",
    [(z - 1, z - 1, 0), (z, z - 3, -3), (z * z - 1, z, -1)],
)
def test_resultant_examples(p, q, expected):
    # sign convention: rows of p first in the Sylvester matrix
    assert resultant(p, q) == expected


@pytest.mark.parametrize(
    "p, roots",
    [(P(6, -5, 1), [2, 3]), (P(1, 0, 1), []), (P(-3, 2), []), (P(0, 0, 1, 1), [-1, 0]), (P(Fraction(1, 2), Fraction(-1, 2)), [1])],
)
def test_integer_roots(p, roots):
    assert integer_roots(p) == roots


def test_eval_at_rational_exact():
    assert (z * z + Fraction(1, 3)).eval_at_rational(Fraction(1, 2)) == Fraction(7, 12)


def test_interpolate_recovers_polynomial():
    p = P(3, -1, 0, Fraction(2, 7))
    xs = [0, 1, 2, 5]
    assert interpolate(xs, [p(x) for x in xs]) == p


def test_lcm_monic():
    assert lcm(2 * z * (z - 1), z * (z + 1)) == z * (z - 1) * (z + 1)


coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.lists(coeff, min_size=0, max_size=5).map(RatPoly)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == RatPoly()


@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_divrem_identity(a, b):
    q, r = a.divrem(b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(polys, st.integers(-4, 4), st.integers(-4, 4))
def test_shift_composes(p, h, k):
    assert p.shift(h).shift(k) == p.shift(h + k)


small_roots = st.lists(st.integers(-4, 4), min_size=1, max_size=3)


@given(small_roots, small_roots)
def test_resultant_zero_iff_common_factor(r1, r2):
    p, q = RatPoly.from_roots(r1), RatPoly.from_roots(r2)
    assert (resultant(p, q) == 0) == (gcd(p, q).degree > 0)


def test_resultant_gcd_corpus_of_100(rng):
    agree = 0
    for _ in range(100):
        p = RatPoly([int(x) for x in rng.integers(-3, 4, size=rng.integers(2, 5))] + [1])
        q = RatPoly([int(x) for x in rng.integers(-3, 4, size=rng.integers(2, 5))] + [1])
        if rng.random() < 0.5:
            shared = z - int(rng.integers(-3, 4))
            p, q = p * shared, q * shared
        agree += (resultant(p, q) == 0) == (gcd(p, q).degree > 0)
    assert agree == 100


# -- exact linear algebra -------------------------------------------------------


def _fraction_gauss_rank(rows):
    M = [[Fraction(x) for x in r] for r in rows]
    r = 0
    for c in range(len(M[0])):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r


matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=5)
)


@given(matrices, st.data())
def test_solve_affine_solutions_satisfy_system(M, data):
    b = data.draw(st.lists(st.integers(-3, 3), min_size=len(M), max_size=len(M)))
    part, basis = solve_affine(M, b)
    assert rank(M) == _fraction_gauss_rank(M)
    assert len(basis) == len(M[0]) - rank(M)
    for v in basis:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in M)
    if part is not None:
        assert all(sum(a * x for a, x in zip(row, part)) == bi for row, bi in zip(M, b))
    else:
        aug = [row + [bi] for row, bi in zip(M, b)]
        assert _fraction_gauss_rank(aug) > rank(M)


def test_solve_affine_empty_system_keeps_columns():
    part, basis = solve_affine([], [], ncols=2)
    assert part == [0, 0] and len(basis) == 2
