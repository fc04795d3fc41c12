from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from bvjordan.bvfun import PiecewiseFn, from_pieces, staircase
from bvjordan.exactnum import Rat

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def R(s):
    return Rat(Fraction(s))


small = st.builds(lambda n, d: Rat(n, d), st.integers(-8, 8), st.sampled_from([1, 2, 4, 8]))
unit_rats = st.builds(lambda d, k: Rat(k % (d + 1), d), st.integers(1, 64), st.integers(0, 10 ** 6))


@st.composite
def functions(draw, denom=16, max_pieces=5):
    """Piecewise-linear functions with arbitrary jumps and spikes on a dyadic grid."""
    ks = draw(st.sets(st.integers(1, denom - 1), max_size=max_pieces - 1))
    bps = [Rat(0)] + [Rat(k, denom) for k in sorted(ks)] + [Rat(1)]
    segs = [(draw(small), draw(small)) for _ in range(len(bps) - 1)]
    vals = []
    for i in range(len(bps)):
        left = segs[i - 1][0] + segs[i - 1][1] * (bps[i] - bps[i - 1]) if i else None
        right = segs[i][0] if i < len(segs) else None
        choices = [v for v in (left, right) if v is not None]
        vals.append(draw(st.one_of(st.sampled_from(choices), small)))
    return PiecewiseFn(tuple(bps), tuple(segs), tuple(vals))


@st.composite
def monotone_staircases(draw, denom=16, max_jumps=6):
    ks = sorted(draw(st.sets(st.integers(1, denom - 1), max_size=max_jumps)))
    level = draw(small)
    start = level
    jumps = {}
    for k in ks:
        after = level + draw(st.integers(1, 6))
        jumps[Rat(k, denom)] = (draw(st.sampled_from([level, after, (level + after) / 2])), after)
        level = after
    return staircase(start, jumps)


@pytest.fixture
def spike_half():
    """Value 1/2 at 1/2, zero elsewhere."""
    return from_pieces((), {R("1/2"): R("1/2")})


@pytest.fixture
def flanked_spike():
    """Spike of height 1 at 1/2 with both neighbouring pieces sloping away from it."""
    return from_pieces([(0, R("1/2"), 0, -1), (R("1/2"), 1, R("-1/2"), 1)], {R("1/2"): 0, 0: 0, 1: 0})
