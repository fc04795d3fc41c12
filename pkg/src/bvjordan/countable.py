"""Countable sets encoded as spike functions, and what can be recovered from them.

A finite set ``A`` with an injective index map ``Y`` becomes the function
``f(x) = 2**-(Y(x)+1)`` on ``A`` and 0 elsewhere.  A Jordan realiser then
gives back an enumeration of ``A``; continuity points, collisions and zeros
of ``f`` give points outside ``A``.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from math import gcd
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .bvfun import (
    FunctionFormatError,
    PiecewiseFn,
    evaluate,
    spike_value,
    spikes,
    unseal,
)
from .exactnum import ONE, ZERO, Partition, Rat, RatLike, check_unit, format_rat, rat
from .realisers import ContinuityOracle, JordanOracle, Fn, enumerate_monotone_discontinuities, native_continuity
from .variation import BVWitness, brute_force_variation


class CollisionNotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class CountableSetRepr:
    """Finite truncation of a countable set ``A`` with its index map ``Y``.

    ``points`` is ascending; ``ranks[i]`` is ``Y(points[i])``.  With
    ``bijective`` the ranks are exactly ``0..len-1``.
    """

    points: tuple[Rat, ...]
    ranks: tuple[int, ...]
    bijective: bool = False

    def __post_init__(self):
        pts = tuple(check_unit(p) for p in self.points)
        ranks = tuple(int(r) for r in self.ranks)
        if len(pts) != len(ranks):
            raise ValueError("need one index per point")
        order = sorted(range(len(pts)), key=pts.__getitem__)
        pts = tuple(pts[i] for i in order)
        ranks = tuple(ranks[i] for i in order)
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise ValueError(f"duplicate point {format_rat(a)}")
        if any(r < 0 for r in ranks):
            raise ValueError("indices must be natural numbers")
        if len(set(ranks)) != len(ranks):
            raise ValueError("index map is not injective")
        if self.bijective and sorted(ranks) != list(range(len(ranks))):
            raise ValueError("bijective index map must hit 0..n-1 exactly")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "ranks", ranks)

    @classmethod
    def from_mapping(cls, index: Mapping[RatLike, int], bijective: bool = False) -> "CountableSetRepr":
        items = list(index.items())
        return cls(tuple(rat(x) for x, _ in items), tuple(n for _, n in items), bijective)

    @classmethod
    def enumerated(cls, points: Iterable[RatLike]) -> "CountableSetRepr":
        """Points indexed in the order given, bijective onto an initial segment."""
        pts = [rat(p) for p in points]
        return cls(tuple(pts), tuple(range(len(pts))), True)

    def __len__(self):
        return len(self.points)

    def __contains__(self, x) -> bool:
        return rat(x) in self.index

    @property
    def index(self) -> dict[Rat, int]:
        return dict(zip(self.points, self.ranks))

    def Y(self, x: RatLike) -> int | None:
        return self.index.get(rat(x))

    @property
    def tail_bound(self) -> Rat:
        """Spike mass missing from the truncation.

        For a bijective map the omitted members carry indices ``>= len``,
        so their spikes sum to at most ``2**-len``.  A finite injective set
        is complete as given.
        """
        if self.bijective:
            return Rat(1, 2 ** len(self.points))
        return ZERO


# -- encoding and recovery ------------------------------------------------------
def encode_set(A: CountableSetRepr) -> PiecewiseFn:
    """Spike function with value ``2**-(Y(x)+1)`` at each member ``x``."""
    return spikes({x: spike_value(n) for x, n in zip(A.points, A.ranks)})


def encode_witness(A: CountableSetRepr) -> BVWitness:
    """``Bound(2)`` in general; the exact variation when ``Y`` is bijective."""
    if A.bijective:
        return BVWitness.exact(brute_force_variation(encode_set(A)))
    return BVWitness.bound(2)


def spike_variation(A: CountableSetRepr) -> Rat:
    """Closed form for the variation of an encoding: ``2h`` per interior spike, ``h`` at 0 or 1."""
    total = ZERO
    for x, n in zip(A.points, A.ranks):
        h = spike_value(n)
        total += h if x in (ZERO, ONE) else 2 * h
    return total


def recovery_candidates(f: Fn, J: JordanOracle, denom_bound: int | None = None):
    """Jordan pair of ``f`` and the joint jump list of its two parts."""
    pair = J(f)
    cands = set(enumerate_monotone_discontinuities(pair.g, True, denom_bound))
    cands |= set(enumerate_monotone_discontinuities(pair.h, True, denom_bound))
    return pair, sorted(cands)


def recover_enumeration(f: Fn, J: JordanOracle, denom_bound: int | None = None) -> list[Rat]:
    """Members of the encoded set: listed jumps of ``g`` or ``h`` with ``g(x) != h(x)``."""
    pair, cands = recovery_candidates(f, J, denom_bound)
    return [x for x in cands if evaluate(pair.g, x) != evaluate(pair.h, x)]


def sup_over_set(F: PiecewiseFn, A: CountableSetRepr) -> Rat:
    if not len(A):
        raise ValueError("supremum over the empty set is undefined")
    return max(evaluate(F, x) for x in A.points)


# -- points outside A -----------------------------------------------------------
def continuity_point_not_in_set(A: CountableSetRepr, L: ContinuityOracle = native_continuity) -> Rat:
    """Midpoint of the widest gap between listed discontinuities of the encoding.

    A continuity point of the encoding has value 0, so it lies outside ``A``.
    """
    f = encode_set(A)
    pts = sorted(set(L(f)) | {ZERO, ONE})
    a, b = max(zip(pts, pts[1:]), key=lambda ab: (ab[1] - ab[0], -ab[0]))
    return (a + b) / 2


def rational_enumeration() -> Iterator[Rat]:
    """Every rational in [0,1] once: 0, 1, then ``k/d`` in lowest terms by ``d``."""
    yield ZERO
    yield ONE
    d = 2
    while True:
        for k in range(1, d):
            if gcd(k, d) == 1:
                yield Rat(k, d)
        d += 1


def nin_collision(Z: Callable[[Rat], Hashable], candidates: Iterable[Rat] | None = None, limit: int = 100_000) -> tuple[Rat, Rat]:
    """First pair ``x != y`` with ``Z(x) == Z(y)`` along ``candidates``."""
    seen = {}
    it = rational_enumeration() if candidates is None else iter(candidates)
    for count, x in enumerate(it):
        if count >= limit:
            break
        z = Z(x)
        if z in seen:
            return seen[z], x
        seen[z] = x
    raise CollisionNotFound(f"no collision among the first {limit} candidates")


def collision_from_rational_valued(f: Fn) -> tuple[Rat, Rat]:
    """Two distinct points with equal value; one of them lies outside the encoded set."""
    fn = unseal(f)
    return nin_collision(lambda x: evaluate(fn, x))


def nin_to_cantor(Y_total: Callable[[Rat], int] | None, A: CountableSetRepr) -> Rat:
    """A point outside ``A`` from a collision of ``Z = Y + 1`` on ``A``, 0 elsewhere.

    ``Z`` is injective on ``A`` with values >= 1, so a collision can only
    happen at value 0, i.e. outside ``A``.
    """
    index = A.index
    if Y_total is None:
        Y_total = lambda x: index.get(x, 0)  # noqa: E731

    def Z(x: Rat) -> int:
        return Y_total(x) + 1 if x in index else 0

    x, y = nin_collision(Z)
    return x if Z(x) == 0 else y


# -- Riemann sums ----------------------------------------------------------------
def riemann_sum(f: PiecewiseFn, P: Partition, tags: Sequence[RatLike]) -> Rat:
    pts = P.points
    if len(tags) != len(pts) - 1:
        raise ValueError(f"need {len(pts) - 1} tags, got {len(tags)}")
    total = ZERO
    for i, t in enumerate(tags):
        t = rat(t)
        a, b = pts[i], pts[i + 1]
        if not a <= t <= b:
            raise ValueError(f"tag {format_rat(t)} outside [{format_rat(a)}, {format_rat(b)}]")
        total += evaluate(f, t) * (b - a)
    return total


def worst_case_tags(f: PiecewiseFn, P: Partition) -> list[Rat]:
    """In each cell, the breakpoint or cell end with the largest value (first on ties)."""
    bps = f.breakpoints
    tags = []
    for a, b in P.intervals():
        inner = bps[bisect_right(bps, a):bisect_left(bps, b)]
        cands = [a, *inner, b]
        tags.append(max(cands, key=lambda x: evaluate(f, x)))
    return tags


def riemann_zero_point(f: Fn) -> Rat:
    """A zero of a non-negative function with integral 0 (off the spike support)."""
    fn = unseal(f)
    for x in rational_enumeration():
        if evaluate(fn, x) == 0:
            return x
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class RiemannBoundRow:
    k: int
    worst_sum: Rat
    distinct_tags: bool
    tight_bound_ok: bool  # worst_sum <= 2**-k
    safe_bound_ok: bool  # worst_sum <= 2**(1-k)


def riemann_bound_report(A: CountableSetRepr, kmax: int = 10) -> list[RiemannBoundRow]:
    """Worst-case tagged sums over uniform partitions of mesh ``2**-k``."""
    f = encode_set(A)
    rows = []
    for k in range(kmax + 1):
        P = Partition(tuple(Rat(j, 2 ** k) for j in range(2 ** k + 1)))
        tags = worst_case_tags(f, P)
        s = riemann_sum(f, P, tags)
        hit = [t for t in tags if evaluate(f, t) != 0]
        rows.append(RiemannBoundRow(k, s, len(set(hit)) == len(hit), s <= Rat(1, 2 ** k), s <= Rat(2, 2 ** k)))
    return rows


# -- set file format -------------------------------------------------------------
def parse_set(text: str) -> CountableSetRepr:
    """Lines ``member x n`` (``x`` in A with index ``n``) and an optional ``bijective``."""
    index: dict[Rat, int] = {}
    bijective = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts == ["bijective"]:
            bijective = True
            continue
        if parts[0] != "member" or len(parts) != 3:
            raise FunctionFormatError(f"expected 'member x n' or 'bijective', got {line!r}", lineno)
        try:
            x = check_unit(parts[1])
            if not parts[2].lstrip("-").isdigit():
                raise ValueError(f"index must be an integer, got {parts[2]!r}")
            n = int(parts[2])
        except ValueError as exc:
            raise FunctionFormatError(str(exc), lineno) from None
        if x in index:
            raise FunctionFormatError(f"duplicate member {format_rat(x)}", lineno)
        index[x] = n
    try:
        return CountableSetRepr.from_mapping(index, bijective)
    except ValueError as exc:
        raise FunctionFormatError(str(exc)) from None


def format_set(A: CountableSetRepr) -> str:
    lines = [f"member {format_rat(x)} {n}" for x, n in zip(A.points, A.ranks)]
    if A.bijective:
        lines.append("bijective")
    return "\n".join(lines) + "\n"
