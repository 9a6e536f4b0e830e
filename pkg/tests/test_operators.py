import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from meroshift.evaluate import evaluate_many
from meroshift.expr import Const, Z, add, exp, mul
from meroshift.parse import parse
from meroshift.operators import (
    ExprRecurrence,
    LinearDifferenceOperator,
    LinearDifferentialOperator,
    ResidualError,
    apply_mixed,
    box_samples,
    delta_n,
    disk_samples,
    estimate_eigenvalue,
    mixed_residual,
    operator_from_dict,
    operator_to_dict,
    residual,
)
from meroshift.roots import roots

from conftest import rel_err


def example_one_one(w):
    return mul(exp(mul(Z, Const(math.log(5) / w))), exp(mul(Z, Const(2j * math.pi / w))))


def test_delta_coefficients():
    assert delta_n(1, 1).coeffs == (-1, 1)
    assert delta_n(1, 2).coeffs == (1, -2, 1)


@pytest.mark.parametrize("n", range(1, 9))
def test_delta_sum_is_exactly_zero(n):
    assert delta_n(1, n).coefficient_sum == 0


@pytest.mark.parametrize("bad", [0, -1, 1.5])
def test_delta_rejects_bad_order(bad):
    with pytest.raises(ValueError):
        delta_n(1, bad)


def test_zero_shift_rejected():
    with pytest.raises(ValueError):
        LinearDifferenceOperator(0, (1, 1))


def test_apply_delta_exp(disk):
    v, _ = evaluate_many(delta_n(1, 1).apply(exp(Z)), disk)
    f, _ = evaluate_many(exp(Z), disk)
    assert rel_err(v, (math.e - 1) * f) < 1e-13


@pytest.mark.parametrize("w", [1.0, 0.5 + 1j, 2j])
def test_example_one_one_eigen(w):
    rep = residual(delta_n(w, 1), example_one_one(w), 4)
    assert rep.max_rel < 1e-10
    assert rep.samples == 100


def test_pi_pi_pair():
    c = 1j
    A = math.pi**math.pi - 1
    f = exp(mul(Z, Const(math.pi * math.log(math.pi) / c)))
    assert residual(delta_n(c, 1), f, A).max_rel < 1e-10


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_binomial_identity(n):
    c = 0.7 + 0.2j
    f = mul(exp(mul(Z, Const(math.log(2) / c))), exp(mul(Z, Const(2j * math.pi / c))))
    assert residual(delta_n(c, n), f, 1).max_rel < 1e-10


def test_characteristic_examples():
    assert np.allclose(delta_n(1, 1).characteristic_poly(1).coeffs, [-2, 1])
    assert np.allclose(delta_n(1, 2).characteristic_poly(1).coeffs, [0, -2, 1])
    assert np.allclose(LinearDifferenceOperator(1, (2, -3, 1)).characteristic_poly(0).coeffs, [2, -3, 1])


@pytest.mark.parametrize("n", range(1, 7))
def test_characteristic_is_binomial_power(n):
    A = 0.3 - 2j
    expected = np.polynomial.polynomial.polypow([-1, 1], n).astype(complex)
    expected[0] -= A
    assert np.allclose(delta_n(2.0, n).characteristic_poly(A).coeffs, expected, atol=1e-12)


coeff = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@given(st.lists(coeff, min_size=2, max_size=4).filter(lambda a: abs(a[-1]) > 0.1), coeff.filter(lambda c: abs(c) > 0.1))
def test_tree_and_direct_paths_agree(coeffs, c):
    op = LinearDifferenceOperator(c, tuple(coeffs))
    f = parse("sin(z) + z^2")
    zs = disk_samples(30, 2.0)
    tree, _ = evaluate_many(op.apply(f), zs)
    direct, _ = op.direct(f, zs)
    assert np.allclose(tree, direct, rtol=1e-12, atol=1e-12 * np.max(np.abs(direct)))


@given(coeff, coeff)
def test_linearity_of_solutions(alpha, beta):
    op = LinearDifferenceOperator(1, (2, -3, 1))
    f = exp(mul(Z, Const(math.log(2))))
    g = mul(f, exp(mul(Z, Const(2j * math.pi))))
    h = add(mul(Const(alpha), f), mul(Const(beta), g))
    if abs(alpha) + abs(beta) < 1e-3:
        return
    assert residual(op, h, 0).max_rel < 1e-9


def test_residual_detects_wrong_eigenvalue():
    rep = residual(delta_n(1, 1), exp(Z), 1)
    assert rep.max_rel > 0.1


def test_residual_skips_poles_and_reports_them():
    f = parse("tan(pi*z)")
    zs = np.array([0.5, 0.25 + 0.1j, 1.5, 0.1])
    rep = ExprRecurrence((parse("-(z^2+1)"), parse("z^2"), Const(1))).residual(f, zs)
    assert len(rep.skipped) == 2
    assert rep.max_rel < 1e-12


def test_all_points_at_poles_is_an_error():
    with pytest.raises(ResidualError):
        residual(delta_n(1, 1), parse("1/sin(pi*z)"), 1, samples=np.array([0.0, 1.0, 2.0]))


def test_estimate_eigenvalue():
    A, spread = estimate_eigenvalue(delta_n(1, 1), example_one_one(1.0))
    assert abs(A - 4) < 1e-12 and spread < 1e-12


def test_mixed_examples(disk):
    f = exp(Z)
    e1, _ = evaluate_many(apply_mixed(delta_n(1, 1), LinearDifferentialOperator((1,), 0), f), disk)
    fv, _ = evaluate_many(f, disk)
    assert rel_err(e1, math.e * fv) < 1e-13
    lam = 0.5 - 1j
    g = exp(mul(Const(lam), Z))
    e2, _ = evaluate_many(apply_mixed(None, LinearDifferentialOperator((1,), 0), g), disk)
    gv, _ = evaluate_many(g, disk)
    assert rel_err(e2, lam * gv) < 1e-13


def test_exponent_polynomials_differ_when_b0_nonzero():
    # b_0 enters additively, so the displayed exponent equation does not give L_k[f] = f
    lop = LinearDifferentialOperator((3.0, 1.0), b0=2.0)
    for r in roots(lop.eigen_exponent_poly(1)):
        f = exp(mul(Const(r.value), Z))
        assert mixed_residual(None, LinearDifferentialOperator((3.0, 1.0)), f, 1).max_rel < 1e-10
    worst = 0.0
    for r in roots(lop.displayed_exponent_poly()):
        f = exp(mul(Const(r.value), Z))
        worst = max(worst, mixed_residual(None, lop, f, 1).max_rel)
    assert worst > 0.1


def test_gamma_recurrence_on_box():
    rec = ExprRecurrence((parse("-z"), Const(1)))
    rep = rec.residual(parse("gamma(z)"), box_samples(100, (1, 6), (-3, 3)))
    assert rep.max_rel < 1e-8


@pytest.mark.parametrize(
    "coeffs, f",
    [
        (["-e", "-(e*z^2+1)", "z^2"], "exp(z)"),
        (["exp(z)", "1"], "exp((z^2-1)/2)"),
    ],
)
def test_claimed_identities_fail(coeffs, f):
    rec = ExprRecurrence(tuple(parse(c) for c in coeffs))
    assert rec.residual(parse(f)).max_rel > 0.1


def test_operator_json_round_trip():
    d = operator_to_dict(delta_n(1j, 2), LinearDifferentialOperator((1, 2), 3))
    dop, lop = operator_from_dict(d)
    assert dop == delta_n(1j, 2)
    assert lop == LinearDifferentialOperator((1, 2), 3)
