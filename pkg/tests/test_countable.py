import itertools

import pytest
from hypothesis import given, strategies as st

from bvjordan.bvfun import FunctionFormatError, constant, evaluate, identity, is_continuous_at, linear
from bvjordan.countable import (
    CollisionNotFound,
    CountableSetRepr,
    collision_from_rational_valued,
    continuity_point_not_in_set,
    encode_set,
    encode_witness,
    format_set,
    nin_collision,
    nin_to_cantor,
    parse_set,
    rational_enumeration,
    recover_enumeration,
    recovery_candidates,
    riemann_bound_report,
    riemann_sum,
    riemann_zero_point,
    spike_variation,
    sup_over_set,
    worst_case_tags,
)
from bvjordan.exactnum import Rat, uniform_grid
from bvjordan.realisers import continuity_from_jordan, native_jordan
from bvjordan.variation import brute_force_variation, var_of_partition

from conftest import R


@st.composite
def sets(draw, denom=64, max_size=12):
    ks = draw(st.lists(st.integers(0, denom), unique=True, max_size=max_size))
    if draw(st.booleans()):
        ranks = draw(st.permutations(range(len(ks))))
        return CountableSetRepr(tuple(Rat(k, denom) for k in ks), tuple(ranks), True)
    ranks = draw(st.lists(st.integers(0, 40), unique=True, min_size=len(ks), max_size=len(ks)))
    return CountableSetRepr(tuple(Rat(k, denom) for k in ks), tuple(ranks))


def test_encode_examples():
    empty = CountableSetRepr((), ())
    assert encode_set(empty) == constant(0)
    assert brute_force_variation(encode_set(empty)) == 0
    f = encode_set(CountableSetRepr.from_mapping({"1/2": 0}))
    assert f(R("1/2")) == R("1/2") and f(R("1/3")) == 0
    two = CountableSetRepr.enumerated(["1/3", "2/3"])
    assert brute_force_variation(encode_set(two), "exhaustive") == R("3/2")
    assert str(encode_witness(two)) == "exact(3/2)"


def test_set_validation():
    with pytest.raises(ValueError):
        CountableSetRepr((R("1/2"), R("1/2")), (0, 1))
    with pytest.raises(ValueError):
        CountableSetRepr((R("1/2"), R("1/3")), (1, 1))
    with pytest.raises(ValueError):
        CountableSetRepr((R("1/2"),), (1,), bijective=True)
    with pytest.raises(ValueError):
        CountableSetRepr((R("3/2"),), (0,))


def test_tail_bound():
    A = CountableSetRepr.enumerated(["1/4", "1/2", "3/4"])
    assert A.tail_bound == R("1/8")
    assert CountableSetRepr.from_mapping({"1/4": 5}).tail_bound == 0


@given(sets())
def test_bijective_variation_is_twice_the_spike_mass(A):
    # isolating partitions see each interior spike twice, endpoint spikes once
    f = encode_set(A)
    V = brute_force_variation(f)
    assert V == spike_variation(A)
    if A.bijective and not ({Rat(0), Rat(1)} & set(A.points)):
        assert V == 2 * (1 - A.tail_bound)


@given(sets(max_size=6))
def test_bound_witness_covers_every_candidate_partition(A):
    f = encode_set(A)
    w = encode_witness(CountableSetRepr(A.points, A.ranks))
    pts = sorted(set(f.breakpoints) | set(f.midpoints()))
    for r in range(4):
        for sub in itertools.combinations(pts[1:-1], r):
            assert w.admits(var_of_partition(f, [pts[0], *sub, pts[-1]]))


def test_recover_examples():
    J = native_jordan
    assert recover_enumeration(encode_set(CountableSetRepr((), ())), J) == []
    assert recover_enumeration(encode_set(CountableSetRepr.from_mapping({"1/2": 0})), J) == [R("1/2")]


@given(sets(max_size=20))
def test_recovery_round_trip_and_membership(A):
    f = encode_set(A)
    assert recover_enumeration(f, native_jordan) == list(A.points)
    pair, cands = recovery_candidates(f, native_jordan)
    for x in cands:
        assert (x in A) == (evaluate(pair.g, x) != evaluate(pair.h, x))


def test_sup_over_set():
    A = CountableSetRepr.enumerated(["1/4", "3/4"])
    assert sup_over_set(identity(), A) == R("3/4")
    assert sup_over_set(constant(5), A) == 5
    with pytest.raises(ValueError):
        sup_over_set(identity(), CountableSetRepr((), ()))


@given(sets(), st.integers(-5, 5), st.integers(-5, 5))
def test_sup_over_set_matches_scan(A, c, s):
    if not len(A):
        return
    F = linear(c, s)
    assert sup_over_set(F, A) == max(c + s * x for x in A.points)


def test_continuity_point_examples():
    assert continuity_point_not_in_set(CountableSetRepr((), ())) == R("1/2")
    tenths = CountableSetRepr(tuple(Rat(k, 10) for k in range(1, 10)), tuple(range(9, 0, -1)))
    x = continuity_point_not_in_set(tenths)
    assert x not in tenths
    assert any(Rat(k, 10) < x < Rat(k + 1, 10) for k in range(10))


@given(sets(max_size=30))
def test_continuity_point_avoids_set(A):
    L = continuity_from_jordan(native_jordan)
    x = continuity_point_not_in_set(A, L)
    assert x not in A
    assert is_continuous_at(encode_set(A), x)


def test_collision_examples():
    assert collision_from_rational_valued(encode_set(CountableSetRepr((), ()))) == (0, 1)
    f = encode_set(CountableSetRepr.from_mapping({"1/2": 0}))
    x, y = collision_from_rational_valued(f)
    assert R("1/2") not in (x, y) and f(x) == f(y) == 0
    with pytest.raises(CollisionNotFound):
        nin_collision(lambda q: q, limit=500)


@given(sets(max_size=30))
def test_collision_and_cantor_points(A):
    f = encode_set(A)
    x, y = collision_from_rational_valued(f)
    assert x != y and f(x) == f(y)
    assert x not in A or y not in A
    z = nin_to_cantor(None, A)
    assert z not in A
    w = riemann_zero_point(f)
    assert f(w) == 0 and w not in A


def test_nin_to_cantor_examples():
    assert nin_to_cantor(None, CountableSetRepr((), ())) == 0
    A = CountableSetRepr.from_mapping({"1/2": 0})
    x = nin_to_cantor(A.Y, A)
    assert x != R("1/2")


def test_rational_enumeration_is_a_listing():
    first = list(itertools.islice(rational_enumeration(), 12))
    assert first[:5] == [0, 1, R("1/2"), R("1/3"), R("2/3")]
    assert len(set(first)) == 12


def test_riemann_sum_examples():
    P = uniform_grid(4)
    assert riemann_sum(constant(0), P, [0, R("1/4"), R("1/2"), 1]) == 0
    assert riemann_sum(identity(), P, [0, R("1/4"), R("1/2"), R("3/4")]) == R("3/8")
    with pytest.raises(ValueError):
        riemann_sum(identity(), P, [0, 0, 0])
    with pytest.raises(ValueError):
        riemann_sum(identity(), P, [0, R("3/4"), R("1/2"), 1])


def test_riemann_bound_with_shared_tags():
    # a spike on a partition point is picked up by both neighbouring cells
    A = CountableSetRepr.from_mapping({"1/2": 0, "1/4": 1})
    P = uniform_grid(4)
    tags = worst_case_tags(encode_set(A), P)
    assert tags == [R("1/4"), R("1/2"), R("1/2"), R("3/4")]
    rows = riemann_bound_report(A, 4)
    assert rows[2].worst_sum == R("5/16") > R("1/4")
    assert not rows[2].tight_bound_ok and rows[2].safe_bound_ok
    assert all(r.safe_bound_ok for r in rows)


@given(sets(max_size=10))
def test_riemann_bounds(A):
    for row in riemann_bound_report(A, 6):
        assert row.safe_bound_ok
        if row.distinct_tags:
            assert row.tight_bound_ok


def test_set_format_roundtrip():
    text = "# three points\nmember 1/3 0\nmember 2/3 2\nmember 1/2 1\nbijective\n"
    A = parse_set(text)
    assert A.bijective and A.points == (R("1/3"), R("1/2"), R("2/3"))
    assert parse_set(format_set(A)) == A


@pytest.mark.parametrize("text,line", [
    ("member 1/2\n", 1),
    ("member 1/2 0\nmember 1/2 1\n", 2),
    ("member 2 0\n", 1),
    ("bijection\n", 1),
])
def test_set_parse_errors(text, line):
    with pytest.raises(FunctionFormatError) as err:
        parse_set(text)
    assert err.value.line == line


def test_set_parse_semantic_errors():
    with pytest.raises(FunctionFormatError):
        parse_set("member 1/2 0\nmember 1/3 0\n")
    with pytest.raises(FunctionFormatError):
        parse_set("member 1/2 3\nbijective\n")
