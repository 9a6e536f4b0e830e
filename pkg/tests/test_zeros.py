import math

import pytest

from meroshift.parse import parse
from meroshift.zeros import count_poles, count_zeros, winding_number, zero_count


def conserved(zl):
    return sum(zl.leaf_windings) == zl.box_winding and zl.total == zl.outer_winding


def test_sin_radius_ten():
    zl = count_zeros(parse("sin(z)"), 10)
    assert [z.multiplicity for z in zl] == [1] * 7
    locs = sorted(z.location.real for z in zl)
    assert all(abs(x - k * math.pi) < 1e-9 for x, k in zip(locs, range(-3, 4)))
    assert conserved(zl)


def test_double_zero():
    zl = count_zeros(parse("z^2"), 1)
    assert len(zl) == 1 and zl.zeros[0].multiplicity == 2
    assert abs(zl.zeros[0].location) < 1e-6


def test_exp_has_no_zeros():
    zl = count_zeros(parse("exp(z)"), 50)
    assert zl.total == 0 and conserved(zl)


CORPUS = [
    ("sin(z)", 10),
    ("sin(z)^2", 7),
    ("z^3 - 1", 2),
    ("(z-1)^2*(z+2)", 3),
    ("cos(z) - 0.5", 6),
    ("exp(z) - 1", 15),
    ("sin(z) - 2*sin(z)", 10),
    ("z^2 + 1", 3),
    ("exp(z^2) - 2", 2.5),
    ("tan(z)", 5),
]


@pytest.mark.parametrize("text, r", CORPUS)
def test_conservation_on_corpus(text, r):
    zl = count_zeros(parse(text), r)
    assert sum(zl.leaf_windings) == zl.box_winding
    if "tan" not in text:
        assert zl.total == zl.outer_winding


def test_radius_nudged_off_a_zero():
    zl = count_zeros(parse("z - 2"), 2)
    assert zl.nudged
    assert zl.total == 1
    assert any("nudged" in d for d in zl.diagnostics)


def test_poles_of_rational():
    pl = count_poles(parse("1/((z-1)^2*(z+3))"), 5)
    got = sorted((round(p.location.real, 6), p.multiplicity) for p in pl)
    assert got == [(-3.0, 1), (1.0, 2)]


def test_cancellation_of_common_factor():
    # tan has no zeros at poles; sin/cos split must not report cos's zeros
    zl = count_zeros(parse("tan(z)"), 5)
    assert sorted(round(z.location.real, 6) for z in zl) == [round(-math.pi, 6), 0.0, round(math.pi, 6)]


def test_zero_count_and_winding():
    n, r = zero_count(parse("sin(z)"), 10)
    assert n == 7 and r >= 10
    assert winding_number(parse("z^3/(z-0.5)"), 1) == 2
