from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bvjordan.exactnum import (
    ExactArithmeticError,
    Partition,
    Rat,
    farey,
    format_decimal,
    format_rat,
    lcm,
    rat,
    rat_arith,
    refine,
    uniform_grid,
)

from conftest import R

rats = st.fractions(max_denominator=10 ** 6).map(rat)


def test_rat_arith_examples():
    assert rat_arith("1/3", "1/6", "+") == R("1/2")
    assert rat_arith("1/2", 0, "×") == 0
    assert rat("2/4") == R("1/2")
    assert format_rat(rat("2/4")) == "1/2"


def test_division_by_zero_is_explicit():
    with pytest.raises(ExactArithmeticError):
        rat_arith(1, 0, "÷")
    with pytest.raises(ValueError):
        rat_arith(1, 2, "%")


def test_rat_rejects_floats_and_junk():
    with pytest.raises(TypeError):
        rat(0.5)
    with pytest.raises(ValueError):
        rat("one half")
    assert rat(" 3/9 ") == R("1/3")
    assert rat(Fraction(6, 4)) == R("3/2")


@given(rats, rats, rats)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if b != 0:
        assert (a / b) * b == a


@given(rats)
def test_lowest_terms_and_roundtrip(a):
    from math import gcd

    assert a.denominator > 0
    assert gcd(abs(int(a.numerator)), int(a.denominator)) == 1
    assert rat(format_rat(a)) == a


def test_huge_denominators_do_not_overflow():
    x = Rat(1, 2 ** 200) + Rat(1, 3 ** 120)
    assert x.denominator == 2 ** 200 * 3 ** 120


def test_format_decimal():
    assert format_decimal(R("1/3")) == "0.333333333333"
    assert format_rat(Rat(-7)) == "-7"


def test_refine_examples():
    assert refine(Partition.of([]), Partition.of(["1/2"])).points == (0, R("1/2"), 1)
    p = Partition.of(["1/3"])
    q = Partition.of(["2/3"])
    assert refine(p, q).points == (0, R("1/3"), R("2/3"), 1)
    assert refine(p, p) == p


inner = st.builds(lambda k, d: Rat(k, d + k + 1), st.integers(1, 50), st.integers(0, 50))


@given(st.lists(inner, max_size=6), st.lists(inner, max_size=6))
def test_refine_is_exact_union(xs, ys):
    p, q = Partition.of(xs), Partition.of(ys)
    r = refine(p, q)
    assert set(r.points) == set(p.points) | set(q.points)


def test_uniform_grid():
    assert uniform_grid(1).points == (0, 1)
    assert uniform_grid(4).points == tuple(Rat(k, 4) for k in range(5))
    assert uniform_grid(3).points == (0, R("1/3"), R("2/3"), 1)
    for n in (1, 5, 12):
        assert uniform_grid(n).mesh == Rat(1, n)
    with pytest.raises(ValueError):
        uniform_grid(0)


@pytest.mark.parametrize("pts", [(0,), (0, R("1/2")), (R("1/4"), 1), (0, R("1/2"), R("1/2"), 1), (0, R("2/3"), R("1/3"), 1)])
def test_partition_rejects_malformed(pts):
    with pytest.raises(ValueError):
        Partition(pts)


def test_farey_sequence():
    assert farey(1) == [0, 1]
    assert farey(3) == [0, R("1/3"), R("1/2"), R("2/3"), 1]
    f8 = farey(8)
    assert f8 == sorted({Rat(k, d) for d in range(1, 9) for k in range(d + 1)})


def test_lcm():
    assert lcm() == 1
    assert lcm(4, 6, 10) == 60
