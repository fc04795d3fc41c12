import pytest
from hypothesis import given

from bvjordan.bvfun import (
    MonotonePair,
    OpaqueFn,
    add,
    constant,
    discontinuities,
    from_pieces,
    grid_resolution,
    identity,
    negate,
    restrict,
    spikes,
    staircase,
    subtract,
    sup_interval,
)
from bvjordan.exactnum import Rat
from bvjordan.realisers import (
    InsufficientResolution,
    NotMonotoneError,
    OracleFailure,
    QueryLog,
    as_opaque,
    check_monotone_pair,
    continuity_from_jordan,
    enumerate_monotone_discontinuities,
    jordan_from_sup,
    range_gaps,
    native_continuity,
    native_jordan,
    native_sup,
    native_weak_jordan,
    random_rationals,
    sup_from_continuity,
)
from bvjordan.variation import brute_force_variation

from conftest import R, functions, monotone_staircases


class Sealed(OpaqueFn):
    """Opaque view whose representation is kept out of reach of the reduction."""

    __slots__ = ("_key",)
    _vault: dict = {}

    def __init__(self, fn, grid=None):
        super().__init__(None, grid)
        self._key = len(Sealed._vault)
        Sealed._vault[self._key] = fn

    @property
    def hidden(self):
        return Sealed._vault[self._key]

    def __call__(self, x):
        return self.hidden(Rat(x))

    def reparam(self, a, b):
        a, b = Rat(a), Rat(b)
        return Sealed(constant(self.hidden(a)) if a == b else restrict(self.hidden, a, b))

    def negate(self):
        return Sealed(negate(self.hidden), self.grid)


def sealed_sup(counter):
    def S(f):
        counter.append(1)
        return sup_interval(f.hidden, 0, 1)

    return S


def test_range_gaps_examples():
    assert enumerate_monotone_discontinuities(identity()) == []
    assert enumerate_monotone_discontinuities(constant(4)) == []
    f = staircase(0, {R("1/3"): (R("1/2"), 1), R("2/3"): (1, 2)})
    assert enumerate_monotone_discontinuities(f) == [R("1/3"), R("2/3")]
    gaps, _ = range_gaps(f, True, 64)
    assert gaps and all(g.agrees for g in gaps)


def test_range_gaps_decreasing_flag_and_errors():
    f = staircase(3, {R("1/4"): (2, 1)})
    assert enumerate_monotone_discontinuities(f, increasing=False) == [R("1/4")]
    with pytest.raises(NotMonotoneError):
        enumerate_monotone_discontinuities(f)
    g = staircase(0, {R("1/7"): (1, 1)})
    with pytest.raises(InsufficientResolution):
        enumerate_monotone_discontinuities(g, True, 6)


@given(monotone_staircases(denom=32, max_jumps=10))
def test_range_gaps_finds_exactly_the_jumps(f):
    assert enumerate_monotone_discontinuities(f, True, 64) == discontinuities(f)
    gaps, _ = range_gaps(f, True, 64)
    assert all(g.agrees for g in gaps)


def test_range_gaps_gap_locations_for_a_step():
    # range of f is [0, 1/3) u {1/2} u (1, 2]: two gaps, both sitting at 1/3
    f = from_pieces([(0, R("1/3"), 0, 1), (R("1/3"), 1, 1, R("3/2"))], {R("1/3"): R("1/2"), 1: 2})
    gaps, _ = range_gaps(f, True, 12)
    assert [(g.p, g.r) for g in gaps] == [(R("1/3"), R("1/2")), (R("1/2"), 1)]
    assert all(g.sup_form == g.inf_form == R("1/3") for g in gaps)


def test_continuity_from_jordan_examples(spike_half):
    L = continuity_from_jordan(native_jordan)
    assert L(from_pieces([(0, R("1/2"), 0, 1), (R("1/2"), 1, R("1/2"), -2)], {1: R("-1/2")})) == []
    assert L(spike_half) == [R("1/2")]
    f = subtract(staircase(0, {R("1/4"): (1, 1)}), staircase(0, {R("3/4"): (0, 2)}))
    assert L(f) == [R("1/4"), R("3/4")]


def test_continuity_filter_drops_cancelling_jumps():
    def J(f):
        # both parts jump at 1/2 by the same amount; f itself is continuous there
        bump = staircase(0, {R("1/2"): (1, 1)})
        return MonotonePair(add(f, bump), bump)

    L = continuity_from_jordan(J)
    assert L(identity()) == []


@given(functions())
def test_continuity_from_jordan_is_exact(f):
    assert continuity_from_jordan(native_jordan)(f) == discontinuities(f) == native_continuity(f)


def test_sup_from_continuity_examples(spike_half):
    S = sup_from_continuity(continuity_from_jordan(native_jordan))
    assert S(constant(0)) == 0
    assert S(spike_half) == R("1/2")
    assert S(spikes({R("1/2"): R("-1/2")})) == 0


@given(functions())
def test_sup_from_continuity_is_exact(f):
    S = sup_from_continuity(continuity_from_jordan(native_jordan))
    assert S(f) == sup_interval(f, 0, 1) == native_sup(f)


def test_jordan_from_sup_examples(spike_half):
    J = jordan_from_sup(native_sup)
    f = staircase(1, {R("1/3"): (1, 2)})
    pair = J(as_opaque(f))
    assert pair.g == f and pair.h == constant(0)
    pair = J(as_opaque(spike_half))
    assert check_monotone_pair(spike_half, pair)
    assert discontinuities(pair.g) == [R("1/2")]
    assert discontinuities(pair.h) == [R("1/2")]


def test_jordan_from_sup_is_blind(flanked_spike):
    calls = []
    log = QueryLog()
    J = jordan_from_sup(sealed_sup(calls), log=log, trace=True)
    pair = J(Sealed(flanked_spike, grid_resolution(flanked_spike)))
    assert check_monotone_pair(flanked_spike, pair)
    assert len(calls) == log.sup_calls > 0
    assert log.lines[0].startswith("S+[0,")
    assert log.evaluations > 0


def test_jordan_from_sup_needs_grid_hint(spike_half):
    with pytest.raises(OracleFailure):
        jordan_from_sup(native_sup)(OpaqueFn(spike_half))


def test_full_equivalence_cycle(flanked_spike):
    S = sup_from_continuity(continuity_from_jordan(native_jordan))
    pair = jordan_from_sup(S)(as_opaque(flanked_spike))
    assert check_monotone_pair(flanked_spike, pair)


@given(functions(max_pieces=3))
def test_blind_route_on_random_functions(f):
    calls = []
    pair = jordan_from_sup(sealed_sup(calls))(Sealed(f, grid_resolution(f)))
    assert check_monotone_pair(f, pair, samples=100)


def test_check_monotone_pair_reports_problems():
    f = identity()
    assert check_monotone_pair(f, MonotonePair(f, constant(0)))
    bad_g = from_pieces([(0, R("1/2"), 0, 1), (R("1/2"), 1, 1, -1)], {R("1/2"): R("1/2")})
    verdict = check_monotone_pair(f, MonotonePair(bad_g, subtract(bad_g, f)))
    assert not verdict
    assert any("decreasing segment on (1/2, 1)" in v for v in verdict.violations)
    verdict = check_monotone_pair(f, MonotonePair(f, constant(1)))
    assert any("g - h != f" in v for v in verdict.violations)


def test_weak_jordan_needs_exact_variation(spike_half):
    V = brute_force_variation(spike_half)
    assert check_monotone_pair(spike_half, native_weak_jordan(spike_half, V))
    with pytest.raises(OracleFailure):
        native_weak_jordan(spike_half, V + 1)


def test_random_rationals_are_seeded():
    a = random_rationals(50, seed=3)
    assert a == random_rationals(50, seed=3)
    assert a != random_rationals(50, seed=4)
    assert all(0 <= x <= 1 and x.denominator <= 2 ** 10 for x in a)
