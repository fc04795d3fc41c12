"""Seeded random instances: functions, monotone staircases and countable sets.

Every generator takes a :class:`random.Random`; the corpus builders take a
seed and return the same instances for the same seed on every platform.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .bvfun import PiecewiseFn, staircase, subtract, simplify
from .countable import CountableSetRepr, encode_set
from .exactnum import ONE, ZERO, Rat

KINDS = ("staircase", "piecewise", "spikes", "difference")


@dataclass(frozen=True)
class Instance:
    ident: str
    kind: str
    f: PiecewiseFn


def small_rat(rng: random.Random, lo: int = -8, hi: int = 8) -> Rat:
    return Rat(rng.randint(lo, hi), rng.choice((1, 2, 4, 8)))


def _grid_points(rng: random.Random, denom: int, count: int, interior: bool = True) -> list[Rat]:
    ks = range(1, denom) if interior else range(denom + 1)
    count = min(count, len(ks))
    return sorted(Rat(k, denom) for k in rng.sample(ks, count))


def _between(rng: random.Random, a: Rat, b: Rat) -> Rat:
    lo, hi = min(a, b), max(a, b)
    return rng.choice((lo, hi, (lo + hi) / 2))


def random_staircase(rng: random.Random, monotone: bool = True, max_jumps: int = 6, denom: int = 16) -> PiecewiseFn:
    xs = _grid_points(rng, denom, rng.randint(1, max_jumps))
    level = small_rat(rng)
    start = level
    jumps = {}
    for x in xs:
        if monotone:
            after = level + Rat(rng.randint(1, 8), rng.choice((1, 2, 4)))
            at = _between(rng, level, after)
        else:
            after = small_rat(rng)
            at = small_rat(rng) if rng.random() < 0.5 else _between(rng, level, after)
        jumps[x] = (at, after)
        level = after
    return staircase(start, jumps)


def random_piecewise(rng: random.Random, monotone: bool = False, max_pieces: int = 5, denom: int = 16) -> PiecewiseFn:
    """Linear pieces on a random dyadic grid; jumps and spikes appear at random."""
    inner = _grid_points(rng, denom, rng.randint(0, max_pieces - 1))
    bps = [ZERO, *inner, ONE]
    segs = []
    for _ in range(len(bps) - 1):
        if monotone:
            segs.append((small_rat(rng, 0, 4), Rat(rng.randint(0, 8), rng.choice((1, 2, 4)))))
        else:
            segs.append((small_rat(rng), small_rat(rng)))
    if monotone:
        # make every jump go upwards by shifting later pieces
        fixed = [segs[0]]
        for i in range(1, len(segs)):
            prev_end = fixed[-1][0] + fixed[-1][1] * (bps[i] - bps[i - 1])
            c, s = segs[i]
            fixed.append((prev_end + (c if rng.random() < 0.5 else ZERO), s))
        segs = fixed
    vals = []
    for i in range(len(bps)):
        left = segs[i - 1][0] + segs[i - 1][1] * (bps[i] - bps[i - 1]) if i > 0 else None
        right = segs[i][0] if i < len(segs) else None
        sides = [v for v in (left, right) if v is not None]
        if monotone:
            vals.append(_between(rng, sides[0], sides[-1]))
        elif rng.random() < 0.3:
            vals.append(small_rat(rng))
        else:
            vals.append(rng.choice(sides))
    return PiecewiseFn(tuple(bps), tuple(segs), tuple(vals))


def random_set(rng: random.Random, max_size: int = 50, denom: int = 64, bijective: bool | None = None) -> CountableSetRepr:
    size = rng.randint(0, max_size)
    pts = [Rat(k, denom) for k in rng.sample(range(denom + 1), min(size, denom + 1))]
    if bijective is None:
        bijective = rng.random() < 0.5
    if bijective:
        ranks = list(range(len(pts)))
        rng.shuffle(ranks)
    else:
        ranks = rng.sample(range(2 * len(pts) + 4), len(pts))
    return CountableSetRepr(tuple(pts), tuple(ranks), bijective)


def random_spikes(rng: random.Random, max_size: int = 8, denom: int = 16) -> PiecewiseFn:
    return encode_set(random_set(rng, max_size, denom))


def random_difference(rng: random.Random) -> PiecewiseFn:
    g0 = random_piecewise(rng, monotone=True)
    h0 = random_staircase(rng) if rng.random() < 0.5 else random_piecewise(rng, monotone=True)
    return simplify(subtract(g0, h0))


def build_corpus(seed: int = 0, size: int = 200) -> list[Instance]:
    """``size`` functions cycling through the four kinds."""
    rng = random.Random(seed)
    out = []
    for i in range(size):
        kind = KINDS[i % len(KINDS)]
        if kind == "staircase":
            f = random_staircase(rng, monotone=rng.random() < 0.5)
        elif kind == "piecewise":
            f = random_piecewise(rng)
        elif kind == "spikes":
            f = random_spikes(rng)
        else:
            f = random_difference(rng)
        out.append(Instance(f"{kind[:2]}{i:03d}", kind, f))
    return out


def monotone_staircases(seed: int = 0, count: int = 100, max_jumps: int = 20, max_denom: int = 32) -> list[PiecewiseFn]:
    """Non-decreasing staircases with jump points of denominator at most ``max_denom``."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        pts = set()
        target = rng.randint(0, max_jumps)
        while len(pts) < target:
            d = rng.randint(2, max_denom)
            pts.add(Rat(rng.randint(0, d), d))
        level = small_rat(rng)
        start = level
        jumps = {}
        for x in sorted(pts):
            after = level + Rat(rng.randint(1, 6), rng.choice((1, 2, 3, 4)))
            if x == ZERO:
                jumps[x] = (level, after)
            elif x == ONE:
                jumps[x] = (after, after)
            else:
                jumps[x] = (_between(rng, level, after), after)
            level = after
        out.append(staircase(start, jumps))
    return out


def random_sets(seed: int = 0, count: int = 100, max_size: int = 50) -> list[CountableSetRepr]:
    rng = random.Random(seed)
    return [random_set(rng, max_size) for _ in range(count)]
