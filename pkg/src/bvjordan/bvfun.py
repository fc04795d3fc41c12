"""Piecewise-linear functions with jumps and isolated spikes on [0,1].

A :class:`PiecewiseFn` is given by breakpoints ``0 = b0 < ... < bK = 1``, a
linear piece ``c + s*(x - u)`` on every open interval ``(u, v)`` between
consecutive breakpoints, and an explicit value at every breakpoint.  Value
jumps and isolated spikes are therefore ordinary members of the class, and
every member has finite total variation.

Suprema reported by :func:`sup_interval` are true suprema: a one-sided
limit of a linear piece that is approached but never attained still counts.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .exactnum import Rat, ONE, ZERO, RatLike, check_unit, format_rat, lcm, rat

Segment = tuple[Rat, Rat]


class FunctionFormatError(ValueError):
    """A function or set file does not parse; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class PiecewiseFn:
    breakpoints: tuple[Rat, ...]
    segments: tuple[Segment, ...]
    values: tuple[Rat, ...]

    def __post_init__(self):
        bps = tuple(rat(b) for b in self.breakpoints)
        segs = tuple((rat(c), rat(s)) for c, s in self.segments)
        vals = tuple(rat(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "values", vals)
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(v <= u for u, v in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(segs) != len(bps) - 1 or len(vals) != len(bps):
            raise ValueError("need one segment per gap and one value per breakpoint")

    # -- evaluation -------------------------------------------------------
    def __call__(self, x: RatLike) -> Rat:
        return evaluate(self, x)

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    def seg_value(self, i: int, x: Rat) -> Rat:
        c, s = self.segments[i]
        return c + s * (x - self.breakpoints[i])

    def seg_start(self, i: int) -> Rat:
        """Limit of segment ``i`` at its left end (the right limit at ``b_i``)."""
        return self.segments[i][0]

    def seg_end(self, i: int) -> Rat:
        """Limit of segment ``i`` at its right end (the left limit at ``b_{i+1}``)."""
        c, s = self.segments[i]
        return c + s * (self.breakpoints[i + 1] - self.breakpoints[i])

    def left_limit(self, i: int) -> Rat | None:
        return self.seg_end(i - 1) if i > 0 else None

    def right_limit(self, i: int) -> Rat | None:
        return self.seg_start(i) if i < len(self.segments) else None

    def limits_at(self, x: RatLike) -> tuple[Rat | None, Rat, Rat | None]:
        """``(f(x-), f(x), f(x+))``; a missing side at 0 or 1 is ``None``."""
        x = check_unit(x)
        i = bisect_left(self.breakpoints, x)
        if i < len(self.breakpoints) and self.breakpoints[i] == x:
            return self.left_limit(i), self.values[i], self.right_limit(i)
        v = self.seg_value(i - 1, x)
        return v, v, v

    def midpoints(self) -> list[Rat]:
        return [(u + v) / 2 for u, v in zip(self.breakpoints, self.breakpoints[1:])]

    def __repr__(self) -> str:
        return f"PiecewiseFn<{len(self.segments)} segments>"


@dataclass(frozen=True)
class MonotonePair:
    g: PiecewiseFn
    h: PiecewiseFn


def evaluate(f: PiecewiseFn, x: RatLike) -> Rat:
    x = check_unit(x)
    bps = f.breakpoints
    i = bisect_left(bps, x)
    if bps[i] == x:
        return f.values[i]
    return f.seg_value(i - 1, x)


def evaluate_sorted(f: PiecewiseFn, xs: Sequence[Rat]) -> list[Rat]:
    """Evaluate at ascending points with one merged sweep."""
    out = []
    bps = f.breakpoints
    i = 0
    for x in xs:
        while bps[i + 1] < x:
            i += 1
        if bps[i] == x:
            out.append(f.values[i])
        elif bps[i + 1] == x:
            out.append(f.values[i + 1])
        else:
            out.append(f.seg_value(i, x))
    return out


def interval_extrema(f: PiecewiseFn, a: RatLike, b: RatLike) -> tuple[Rat, Rat]:
    """``(inf, sup)`` of ``f`` over the closed interval ``[a, b]``."""
    a, b = check_unit(a, "a"), check_unit(b, "b")
    if a > b:
        raise ValueError(f"empty interval [{format_rat(a)}, {format_rat(b)}]")
    return extrema_unchecked(f, a, b)


def extrema_unchecked(f: PiecewiseFn, a: Rat, b: Rat) -> tuple[Rat, Rat]:
    """:func:`interval_extrema` for ``0 <= a <= b <= 1`` already validated as ``Rat``."""
    bps, segs, vals = f.breakpoints, f.segments, f.values
    i = bisect_left(bps, a)
    fa = vals[i] if bps[i] == a else segs[i - 1][0] + segs[i - 1][1] * (a - bps[i - 1])
    if a == b:
        return fa, fa
    j = bisect_left(bps, b)
    fb = vals[j] if bps[j] == b else segs[j - 1][0] + segs[j - 1][1] * (b - bps[j - 1])
    lo, hi = (fa, fb) if fa <= fb else (fb, fa)
    first = i if bps[i] == a else i - 1
    for k in range(first, j):
        u, v = bps[k], bps[k + 1]
        c, sl = segs[k]
        if a < u:
            pv = vals[k]
            if pv < lo:
                lo = pv
            elif pv > hi:
                hi = pv
        s0 = c if a <= u else c + sl * (a - u)
        s1 = c + sl * ((v if v <= b else b) - u)
        if s0 > s1:
            s0, s1 = s1, s0
        if s0 < lo:
            lo = s0
        if s1 > hi:
            hi = s1
    return lo, hi


def sup_interval(f: PiecewiseFn, a: RatLike, b: RatLike) -> Rat:
    return interval_extrema(f, a, b)[1]


def inf_interval(f: PiecewiseFn, a: RatLike, b: RatLike) -> Rat:
    return interval_extrema(f, a, b)[0]


# -- construction -------------------------------------------------------------
def constant(c: RatLike) -> PiecewiseFn:
    c = rat(c)
    return PiecewiseFn((ZERO, ONE), ((c, ZERO),), (c, c))


def linear(c: RatLike, s: RatLike) -> PiecewiseFn:
    """``x -> c + s*x`` on all of [0,1]."""
    c, s = rat(c), rat(s)
    return PiecewiseFn((ZERO, ONE), ((c, s),), (c, c + s))


def identity() -> PiecewiseFn:
    return linear(0, 1)


def spike_value(rank: int) -> Rat:
    return Rat(1, 2 ** (rank + 1))


def from_pieces(
    pieces: Mapping[tuple[Rat, Rat], Segment] | Iterable[tuple[Rat, Rat, Rat, Rat]] = (),
    points: Mapping[Rat, Rat] | None = None,
) -> PiecewiseFn:
    """Assemble a function from linear pieces ``(u, v, c, s)`` and point values.

    Open intervals not covered by a piece are zero.  A breakpoint with no
    explicit value takes the common one-sided limit; a jump without an
    explicit value is an error, except at 0 and 1 where the default is 0.
    """
    if isinstance(pieces, Mapping):
        pieces = [(u, v, c, s) for (u, v), (c, s) in pieces.items()]
    pieces = sorted((rat(u), rat(v), rat(c), rat(s)) for u, v, c, s in pieces)
    points = {rat(x): rat(v) for x, v in (points or {}).items()}
    bps = {ZERO, ONE} | set(points)
    for u, v, _, _ in pieces:
        check_unit(u, "u"), check_unit(v, "v")
        if u >= v:
            raise ValueError(f"segment ({format_rat(u)}, {format_rat(v)}) is empty")
        bps |= {u, v}
    for x in points:
        check_unit(x)
    for (u0, v0, _, _), (u1, _, _, _) in zip(pieces, pieces[1:]):
        if u1 < v0:
            raise ValueError(f"segments overlap at {format_rat(u1)}")
    bps = sorted(bps)
    segs = []
    for u, v in zip(bps, bps[1:]):
        seg = (ZERO, ZERO)
        for pu, pv, c, s in pieces:
            if pu <= u and v <= pv:
                seg = (c + s * (u - pu), s)
                break
        segs.append(seg)
    vals = []
    for i, x in enumerate(bps):
        if x in points:
            vals.append(points[x])
            continue
        left = segs[i - 1][0] + segs[i - 1][1] * (x - bps[i - 1]) if i > 0 else None
        right = segs[i][0] if i < len(segs) else None
        if left is None or right is None:
            vals.append(ZERO)
        elif left == right:
            vals.append(left)
        else:
            raise ValueError(f"jump at {format_rat(x)} needs an explicit point value")
    return PiecewiseFn(tuple(bps), tuple(segs), tuple(vals))


def spikes(heights: Mapping[Rat, Rat]) -> PiecewiseFn:
    """Zero baseline with value ``heights[x]`` at each listed point."""
    return from_pieces((), heights)


def staircase(start: RatLike, jumps: Mapping[Rat, tuple[Rat, Rat]]) -> PiecewiseFn:
    """Piecewise constant function.

    ``jumps`` maps a point ``x`` to ``(value_at_x, level_after_x)``; the level
    before the first jump is ``start``.
    """
    level = rat(start)
    bps = [ZERO]
    vals = [level]
    segs = []
    jumps = {rat(x): (rat(a), rat(b)) for x, (a, b) in jumps.items()}
    if ZERO in jumps:
        vals[0], level = jumps.pop(ZERO)
    for x in sorted(jumps):
        at, after = jumps[x]
        segs.append((level, ZERO))
        bps.append(x)
        vals.append(at)
        level = after
    if bps[-1] != ONE:
        segs.append((level, ZERO))
        bps.append(ONE)
        vals.append(level)
    return PiecewiseFn(tuple(bps), tuple(segs), tuple(vals))


# -- structural edits ---------------------------------------------------------
def with_breakpoints(f: PiecewiseFn, extra: Iterable[RatLike]) -> PiecewiseFn:
    """Same function, with additional (continuity) breakpoints inserted."""
    new = sorted(set(f.breakpoints) | {check_unit(x) for x in extra})
    if len(new) == len(f.breakpoints):
        return f
    segs, vals = [], []
    for x in new:
        i = bisect_left(f.breakpoints, x)
        vals.append(f.values[i] if f.breakpoints[i] == x else f.seg_value(i - 1, x))
    for u, v in zip(new, new[1:]):
        i = bisect_right(f.breakpoints, u) - 1
        segs.append((f.seg_value(i, u), f.segments[i][1]))
    return PiecewiseFn(tuple(new), tuple(segs), tuple(vals))


def simplify(f: PiecewiseFn) -> PiecewiseFn:
    """Drop interior breakpoints where the function is affine across them."""
    keep = [0]
    for i in range(1, len(f.breakpoints) - 1):
        left, right = f.seg_end(i - 1), f.seg_start(i)
        if not (left == f.values[i] == right and f.segments[i - 1][1] == f.segments[i][1]):
            keep.append(i)
    keep.append(len(f.breakpoints) - 1)
    if len(keep) == len(f.breakpoints):
        return f
    bps = tuple(f.breakpoints[i] for i in keep)
    vals = tuple(f.values[i] for i in keep)
    segs = tuple(f.segments[i] for i in keep[:-1])
    return PiecewiseFn(bps, segs, vals)


def scale_shift(f: PiecewiseFn, alpha: RatLike, beta: RatLike) -> PiecewiseFn:
    """Pointwise ``alpha*f + beta``."""
    alpha, beta = rat(alpha), rat(beta)
    segs = tuple((alpha * c + beta, alpha * s) for c, s in f.segments)
    vals = tuple(alpha * v + beta for v in f.values)
    return PiecewiseFn(f.breakpoints, segs, vals)


def negate(f: PiecewiseFn) -> PiecewiseFn:
    return scale_shift(f, -1, 0)


def _combine(f: PiecewiseFn, g: PiecewiseFn, sign: int) -> PiecewiseFn:
    f2 = with_breakpoints(f, g.breakpoints)
    g2 = with_breakpoints(g, f.breakpoints)
    segs = tuple((c1 + sign * c2, s1 + sign * s2) for (c1, s1), (c2, s2) in zip(f2.segments, g2.segments))
    vals = tuple(a + sign * b for a, b in zip(f2.values, g2.values))
    return PiecewiseFn(f2.breakpoints, segs, vals)


def add(f: PiecewiseFn, g: PiecewiseFn) -> PiecewiseFn:
    return _combine(f, g, 1)


def subtract(f: PiecewiseFn, g: PiecewiseFn) -> PiecewiseFn:
    return _combine(f, g, -1)


def restrict(f: PiecewiseFn, a: RatLike, b: RatLike) -> PiecewiseFn:
    """The function ``y -> f(a + (b - a)*y)`` on [0,1]; requires ``a < b``."""
    a, b = check_unit(a, "a"), check_unit(b, "b")
    if a >= b:
        raise ValueError("restrict needs a < b")
    width = b - a
    g = with_breakpoints(f, (a, b))
    lo = g.breakpoints.index(a)
    hi = g.breakpoints.index(b)
    bps = tuple((x - a) / width for x in g.breakpoints[lo:hi + 1])
    segs = tuple((c, s * width) for c, s in g.segments[lo:hi])
    return PiecewiseFn(bps, segs, g.values[lo:hi + 1])


def restrict_prefix(f: PiecewiseFn, x: RatLike) -> PiecewiseFn:
    """``y -> f(x*y)``: the part of ``f`` on ``[0, x]`` stretched over [0,1]."""
    x = check_unit(x)
    if x == 0:
        raise ValueError("restrict_prefix needs x > 0")
    return restrict(f, ZERO, x)


# -- structural queries -------------------------------------------------------
def candidate_points(f: PiecewiseFn) -> list[Rat]:
    """Breakpoints plus one midpoint per segment, ascending."""
    return sorted(set(f.breakpoints) | set(f.midpoints()))


def separating_n(f: PiecewiseFn) -> int:
    """Least ``n`` with ``1/n`` below the smallest gap between candidate points."""
    pts = candidate_points(f)
    gap = min(b - a for a, b in zip(pts, pts[1:]))
    return int(1 / gap) + 1


def denominator_bound(f: PiecewiseFn) -> int:
    """Largest breakpoint denominator: every breakpoint is in ``farey(bound)``."""
    return max(b.denominator for b in f.breakpoints)


def grid_resolution(f: PiecewiseFn) -> int:
    """Least ``n`` such that every breakpoint is a multiple of ``1/n``."""
    return lcm(*(b.denominator for b in f.breakpoints))


def discontinuities(f: PiecewiseFn) -> list[Rat]:
    """Points where a one-sided limit differs from the value, ascending."""
    out = []
    for i, x in enumerate(f.breakpoints):
        left, right = f.left_limit(i), f.right_limit(i)
        v = f.values[i]
        if (left is not None and left != v) or (right is not None and right != v):
            out.append(x)
    return out


def is_continuous_at(f: PiecewiseFn, x: RatLike) -> bool:
    left, v, right = f.limits_at(x)
    return (left is None or left == v) and (right is None or right == v)


def monotonicity_violations(f: PiecewiseFn) -> list[str]:
    """Reasons ``f`` fails to be non-decreasing; empty when it is."""
    out = []
    for i, (c, s) in enumerate(f.segments):
        if s < 0:
            u, v = f.breakpoints[i], f.breakpoints[i + 1]
            out.append(f"decreasing segment on ({format_rat(u)}, {format_rat(v)}), slope {format_rat(s)}")
    for i, x in enumerate(f.breakpoints):
        left, v, right = f.left_limit(i), f.values[i], f.right_limit(i)
        if left is not None and left > v:
            out.append(f"drop at {format_rat(x)}: f(x-)={format_rat(left)} > f(x)={format_rat(v)}")
        if right is not None and v > right:
            out.append(f"drop at {format_rat(x)}: f(x)={format_rat(v)} > f(x+)={format_rat(right)}")
    return out


def is_non_decreasing(f: PiecewiseFn) -> bool:
    return not monotonicity_violations(f)


def structural_variation(f: PiecewiseFn) -> tuple[Rat, Rat]:
    """``(total, positive)`` variation summed piece by piece from the representation."""
    total = pos = ZERO
    for i, x in enumerate(f.breakpoints):
        v = f.values[i]
        left, right = f.left_limit(i), f.right_limit(i)
        steps = []
        if left is not None:
            steps.append(v - left)
        if right is not None:
            steps.append(right - v)
        if i < len(f.segments):
            steps.append(f.seg_end(i) - f.seg_start(i))
        for d in steps:
            total += abs(d)
            pos += max(d, ZERO)
    return total, pos


# -- opaque interface ---------------------------------------------------------
class OpaqueFn:
    """Evaluation-only view of a function, for reductions that must not peek.

    Supports pointwise evaluation, affine reparametrisation of a subinterval,
    and negation.  ``grid`` is an optional promise that every breakpoint lies
    on a multiple of ``1/grid``; it is the only structural hint exposed.
    Native oracles recover the underlying function with :func:`unseal`.
    """

    __slots__ = ("_fn", "grid")

    def __init__(self, fn: PiecewiseFn, grid: int | None = None):
        self._fn = fn
        self.grid = grid

    def __call__(self, x: RatLike) -> Rat:
        return evaluate(self._fn, x)

    def reparam(self, a: RatLike, b: RatLike) -> "OpaqueFn":
        """View of ``y -> f(a + (b - a)*y)``; ``a == b`` gives the constant ``f(a)``."""
        a, b = rat(a), rat(b)
        if a == b:
            return OpaqueFn(constant(evaluate(self._fn, a)))
        return OpaqueFn(restrict(self._fn, a, b))

    def negate(self) -> "OpaqueFn":
        return OpaqueFn(negate(self._fn), self.grid)

    def __repr__(self) -> str:
        return "OpaqueFn(...)"


def unseal(f: PiecewiseFn | OpaqueFn) -> PiecewiseFn:
    if isinstance(f, OpaqueFn):
        return f._fn
    return f


# -- text format --------------------------------------------------------------
def parse_function(text: str) -> PiecewiseFn:
    """Parse ``segment u v c s`` / ``point x v`` / ``spike x n`` records."""
    pieces, points = [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *args = line.split()
        try:
            if kind == "segment" and len(args) == 4:
                pieces.append(tuple(rat(a) for a in args))
            elif kind == "point" and len(args) == 2:
                x = check_unit(args[0])
                if x in points:
                    raise ValueError(f"duplicate value for {format_rat(x)}")
                points[x] = rat(args[1])
            elif kind == "spike" and len(args) == 2:
                x = check_unit(args[0])
                if not args[1].isdigit():
                    raise ValueError(f"spike rank must be a non-negative integer, got {args[1]!r}")
                n = int(args[1])
                if n < 0:
                    raise ValueError("spike rank must be >= 0")
                if x in points:
                    raise ValueError(f"duplicate value for {format_rat(x)}")
                points[x] = spike_value(n)
            else:
                raise ValueError(f"unrecognised record {line!r}")
        except (ValueError, TypeError) as exc:
            raise FunctionFormatError(str(exc), lineno) from None
    try:
        return from_pieces(pieces, points)
    except ValueError as exc:
        raise FunctionFormatError(str(exc)) from None


def format_function(f: PiecewiseFn) -> str:
    lines = []
    for i, (c, s) in enumerate(f.segments):
        u, v = f.breakpoints[i], f.breakpoints[i + 1]
        lines.append(f"segment {format_rat(u)} {format_rat(v)} {format_rat(c)} {format_rat(s)}")
    for x, v in zip(f.breakpoints, f.values):
        lines.append(f"point {format_rat(x)} {format_rat(v)}")
    return "\n".join(lines) + "\n"
