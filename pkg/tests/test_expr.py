import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from meroshift.evaluate import evaluate, evaluate_many, log_abs
from meroshift.expr import (
    Add,
    Call,
    Const,
    Mul,
    Z,
    add,
    as_fraction,
    cos,
    derivative,
    digamma,
    exp,
    gamma,
    log,
    mul,
    principal_power,
    shift,
    sin,
    tan,
    to_text,
)
from meroshift.parse import ParseError, parse
from meroshift.special import digamma as psi
from meroshift.special import gamma as gamma_fn
from meroshift.special import polygamma

from conftest import rel_err


# -- parser -------------------------------------------------------------------


def test_parse_exp():
    assert parse("exp(z)") == Call("exp", Z)


def test_parse_literal_forms():
    e = parse("2*z + 3i")
    assert isinstance(e, Add)
    assert e.left == Mul(Const(2), Z)
    assert e.right == Const(3j)


def test_parse_tan_pi():
    e = parse("tan(pi*z)")
    assert e == Call("tan", Mul(Const(math.pi), Z))


@pytest.mark.parametrize(
    "text, z, expected",
    [
        ("2^3^2", 0, 512),
        ("-z^2", 3, -9),
        ("sqrt(4)", 0, 2),
        ("pow(z, 2) + e", 1, 1 + math.e),
        ("digamma(1)", 0, -0.5772156649015329),
        ("polygamma(1, 1)", 0, math.pi**2 / 6),
        ("  z *  ( 1 + i )  ", 2, 2 + 2j),
    ],
)
def test_parse_values(text, z, expected):
    out = evaluate(parse(text), z)
    assert out.ok
    assert abs(out.value - expected) < 1e-12 * max(1, abs(expected))


@pytest.mark.parametrize("text", ["exp(", "2 +", "foo(z)", "z $ 2", "", "sin z"])
def test_parse_errors_carry_position(text):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position >= 0


CORPUS = [
    "z", "3", "2.5i", "-z", "z+1", "z-1", "2*z", "z/3", "z^2", "z^3 - 2*z + 1",
    "exp(z)", "log(z)", "sin(z)", "cos(z)", "tan(z)", "gamma(z)", "digamma(z)",
    "exp(2*z)", "exp(-z^2)", "sin(pi*z)", "tan(pi*z)", "cos(2*pi*z/3)", "1/(z-1)",
    "(z^2+1)/(z-1)", "exp(z)*sin(z)", "z*exp(z*log(5))", "exp(z^2)/gamma(z)",
    "(1+2i)*z", "z^(1/2)", "2^z", "pi^pi", "e^z", "-(z+1)^2", "sin(z)^2",
    "1/(exp(2*pi*i*z)-1)", "exp((z^2-1)/2)", "sqrt(z+4)", "pow(z, 3)", "gamma(z+1)-z*gamma(z)",
    "tan(pi*z)+z", "z^2*exp(z+2)", "log(1+z^2)", "cos(z)/sin(z)", "exp(exp(z/4))",
    "(z-1)*(z-2)*(z-3)", "1/z^2", "0.03*z", "digamma(z+2)", "-2*-z", "z-(1-z)",
]


def test_corpus_has_fifty():
    assert len(CORPUS) == 50


@pytest.mark.parametrize("text", CORPUS)
def test_print_parse_round_trip(text, disk):
    e = parse(text)
    e2 = parse(to_text(e))
    zs = disk[:40] * 0.5 + 0.37
    v1, b1 = evaluate_many(e, zs)
    v2, b2 = evaluate_many(e2, zs)
    assert np.array_equal(b1, b2)
    ok = ~b1
    assert np.allclose(v1[ok], v2[ok], rtol=1e-12, atol=0)


# -- evaluation ---------------------------------------------------------------


def test_eval_examples():
    assert evaluate(exp(Z), 0).value == 1
    assert abs(evaluate(gamma(Z), 5).value - 24) < 1e-11
    assert evaluate(tan(mul(Const(math.pi), Z)), 0.5).pole


def test_division_by_literal_zero_rejected():
    with pytest.raises((ValueError, ZeroDivisionError)):
        Const(1) / Const(0)


def test_overflow_is_flagged():
    out = evaluate(exp(Z), 800)
    assert out.pole or out.overflow


def test_log_abs_beyond_overflow():
    L, bad = log_abs(exp(mul(Z, Z)), np.array([40.0 + 0j]))
    assert not bad[0]
    assert abs(L[0] - 1600) < 1e-9


@pytest.mark.parametrize("z", [0.5, 1.0, 2.5 + 1j, 7.3 - 4j, -2.5 + 0.5j, 0.1 + 10j])
def test_gamma_against_mpmath(z):
    assert rel_err(gamma_fn(z)[0], complex(mpmath.gamma(z))) < 1e-12


@pytest.mark.parametrize("z", [1.0, 0.3 + 2j, 12 - 3j, -1.5 + 0.2j])
def test_digamma_against_mpmath(z):
    assert rel_err(psi(z)[0], complex(mpmath.digamma(z))) < 1e-11


@pytest.mark.parametrize("n, z", [(1, 1.0), (2, 2.5 + 1j), (3, 0.7)])
def test_polygamma_against_mpmath(n, z):
    assert rel_err(polygamma(n, z)[0], complex(mpmath.polygamma(n, z))) < 1e-10


# -- shift and derivative -------------------------------------------------------


def test_shift_examples():
    assert evaluate(shift(parse("z^2"), 1), 2).value == 9
    assert abs(evaluate(shift(exp(Z), 1), 0).value - math.e) < 1e-15


def test_shift_example_one_one(disk):
    w = 0.7 + 0.3j
    f = mul(exp(mul(Z, Const(math.log(5) / w))), exp(mul(Z, Const(2j * math.pi / w))))
    a, _ = evaluate_many(shift(f, w), disk)
    b, _ = evaluate_many(f, disk)
    assert rel_err(a, 5 * b) < 1e-12


def _finite_difference(e, z, h=1e-5):
    return (evaluate(e, z + h).value - evaluate(e, z - h).value) / (2 * h)


@pytest.mark.parametrize(
    "e, z",
    [(exp(mul(Const(2), Z)), 0.3 + 0.1j), (gamma(Z), 5.0), (tan(Z), 0.4), (digamma(Z), 2 + 1j), (log(Z), 1.5j)],
)
def test_derivative_matches_finite_difference(e, z):
    d = evaluate(derivative(e), z).value
    assert abs(d - _finite_difference(e, z)) <= 1e-7 * max(1, abs(d))


def test_derivative_of_constant():
    assert derivative(Const(3 + 2j)) == Const(0)


def test_derivative_gamma_is_gamma_digamma():
    d = evaluate(derivative(gamma(Z)), 5).value
    assert abs(d - 24 * psi(5.0)[0]) < 1e-9


small = st.floats(-2, 2, allow_nan=False)
cplx = st.builds(complex, small, small)

LIBRARY = [exp(Z), sin(Z), parse("z^3-z"), parse("1/(z-7)"), cos(mul(Const(0.5), Z)), parse("exp(z^2/4)")]


@given(st.sampled_from(LIBRARY), cplx, cplx)
def test_shift_homomorphism(e, a, b):
    zs = np.linspace(-1, 1, 100) + 0.25j * np.cos(np.arange(100))
    v1, _ = evaluate_many(shift(shift(e, a), b), zs)
    v2, _ = evaluate_many(shift(e, a + b), zs)
    assert rel_err(v1, v2) < 1e-10


@given(st.sampled_from(LIBRARY), st.sampled_from(LIBRARY), cplx, cplx)
def test_derivative_linearity(e1, e2, a, b):
    zs = np.linspace(-1, 1, 25) + 0.5j
    lhs, _ = evaluate_many(derivative(add(mul(Const(a), e1), mul(Const(b), e2))), zs)
    d1, _ = evaluate_many(derivative(e1), zs)
    d2, _ = evaluate_many(derivative(e2), zs)
    rhs = a * d1 + b * d2
    assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-10 * np.max(np.abs(rhs)))


@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_principal_power_branch(rho):
    e = principal_power(rho, Z)
    zs = np.array([0.3, 1.7 - 0.2j])
    v, _ = evaluate_many(e, zs)
    assert np.allclose(v, np.exp(zs * cmath.log(rho)), rtol=1e-14)


def test_as_fraction_splits_tan():
    num, den = as_fraction(tan(Z))
    assert num == sin(Z) and den == cos(Z)
