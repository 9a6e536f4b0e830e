import pytest

from meroshift.parse import parse
from meroshift.sharing import shares_value


def test_sin_vs_twice_sin():
    v = shares_value(parse("sin(z)"), parse("2*sin(z)"), 0, 10)
    assert v.cm and v.im and len(v.pairs) == 7
    assert all(p.f_mult == 1 == p.g_mult for p in v.pairs)


def test_sin_vs_sin_squared():
    v = shares_value(parse("sin(z)"), parse("sin(z)^2"), 0, 10)
    assert v.im and not v.cm


def test_vacuous_sharing():
    v = shares_value(parse("exp(z)"), parse("(e-1)*exp(z)"), 0, 20)
    assert v.cm and not v.pairs


@pytest.mark.parametrize(
    "f, g, a",
    [("sin(z)", "sin(z)^2", 0), ("exp(z)", "exp(z) + z", 1), ("z^2-1", "z-1", 0)],
)
def test_symmetry(f, g, a):
    v1 = shares_value(parse(f), parse(g), a, 4)
    v2 = shares_value(parse(g), parse(f), a, 4)
    assert (v1.cm, v1.im) == (v2.cm, v2.im)


@pytest.mark.parametrize("kappa", ["2", "-0.5", "i", "3-4i"])
def test_scaling_invariance(kappa):
    v = shares_value(parse("cos(z)*(z-1)"), parse(f"({kappa})*cos(z)*(z-1)"), 0, 6)
    assert v.cm


@pytest.mark.parametrize("a", [0, 1, 0.5j])
def test_self_sharing(a):
    f = parse("sin(z) + z/3")
    assert shares_value(f, f, a, 5).cm


def test_sharing_infinity():
    v = shares_value(parse("1/(z-1)"), parse("3/(z-1)"), "inf", 4)
    assert v.cm and len(v.pairs) == 1


def test_partial_sharing_lists_unmatched():
    v = shares_value(parse("z*(z-1)"), parse("z*(z-2)"), 0, 3)
    assert not v.im
    assert len(v.unmatched_f) == 1 and len(v.unmatched_g) == 1


def test_table_and_dict():
    v = shares_value(parse("sin(z)"), parse("2*sin(z)"), 0, 4)
    assert len(v.table().splitlines()) == 1 + 3
    d = v.to_dict()
    assert d["cm"] is True and len(d["pairs"]) == 3
