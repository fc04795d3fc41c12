"""Variation functionals, n,f-trails and the positive variation Delta(f).

Two independent routes compute the positive variation of a representable
function:

* the brute-force route (:func:`brute_force_positive_variation`) maximises
  partition sums directly over the limit-augmented candidate sequence, and
* the trail route (:func:`delta`) only ever asks for the supremum and
  infimum of ``f`` over closed grid cells, following the positive n-move
  ``M(n, f)`` as ``n`` grows.

On a uniform grid aligned with the breakpoints, ``M(n, f)`` is eventually
affine in ``1/n``; it reaches ``Delta(f)`` exactly at finite ``n`` only when
no breakpoint needs three alternating roles (e.g. a spike flanked by
segments sloping away from it).  :func:`delta` therefore evaluates the trail
maximum at three successive doublings of a very fine aligned grid and takes
the exact Richardson limit ``2*M(2N) - M(N)``, checking that the three
levels agree on it.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass
from typing import Callable, Iterable, Protocol, Sequence

from .bvfun import (
    MonotonePair,
    OpaqueFn,
    PiecewiseFn,
    evaluate,
    evaluate_sorted,
    grid_resolution,
    extrema_unchecked,
    interval_extrema,
    simplify,
    structural_variation,
    unseal,
)
from .exactnum import Rat, ONE, ZERO, Partition, format_rat

#: Doublings applied to the aligned base grid before extrapolating.
FINE_LEVEL = 40
#: Fine cells kept next to each end of a base cell in the compressed sweep.
EDGE_CELLS = 2
#: Brute-force subset search is only run up to this many candidate values.
EXHAUSTIVE_CAP = 14


class ConvergenceError(ArithmeticError):
    """The trail maxima did not settle into their eventual affine regime."""


class WitnessViolation(ValueError):
    pass


@dataclass(frozen=True)
class BVWitness:
    """Either a bound ``k0`` on every partition sum, or the exact variation."""

    kind: str
    value: Rat

    def __post_init__(self):
        if self.kind not in ("bound", "exact"):
            raise ValueError("kind must be 'bound' or 'exact'")
        object.__setattr__(self, "value", Rat(self.value))
        if self.value < 0:
            raise ValueError("variation witness must be non-negative")

    @classmethod
    def bound(cls, k0: int) -> "BVWitness":
        return cls("bound", Rat(int(k0)))

    @classmethod
    def exact(cls, v) -> "BVWitness":
        return cls("exact", Rat(v))

    def admits(self, partition_sum: Rat) -> bool:
        return partition_sum <= self.value

    def __str__(self):
        return f"{self.kind}({format_rat(self.value)})"


@dataclass(frozen=True)
class Trail:
    n: int
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) % 2:
            raise ValueError("a trail has an even number of cells")
        if any(b <= a for a, b in zip(idx, idx[1:])) or (idx and (idx[0] < 0 or idx[-1] >= self.n)):
            raise ValueError("trail indices must be strictly increasing cells below n")

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.indices[::2], self.indices[1::2]))


# -- partition sums -----------------------------------------------------------
def _values(f: PiecewiseFn, points: Partition | Iterable[Rat]) -> list[Rat]:
    pts = list(points)
    if any(b <= a for a, b in zip(pts, pts[1:])):
        raise ValueError("partition points must be strictly increasing")
    return evaluate_sorted(f, pts)


def _sum_abs(vals: Sequence[Rat]) -> Rat:
    return sum((abs(b - a) for a, b in zip(vals, vals[1:])), ZERO)


def _sum_pos(vals: Sequence[Rat]) -> Rat:
    return sum((b - a for a, b in zip(vals, vals[1:]) if b > a), ZERO)


def var_of_partition(f: PiecewiseFn, P: Partition | Iterable[Rat]) -> Rat:
    return _sum_abs(_values(f, P))


def var_plus_of_partition(f: PiecewiseFn, P: Partition | Iterable[Rat]) -> Rat:
    return _sum_pos(_values(f, P))


# -- brute force --------------------------------------------------------------
def limit_sequence(f: PiecewiseFn) -> list[Rat]:
    """Values along the candidate points, with one-sided limits spliced in.

    Each breakpoint contributes ``f(b-), f(b), f(b+)`` (missing sides at 0
    and 1 omitted) and each segment its midpoint value.  A limit stands for
    points taken arbitrarily close to ``b``, so partition sums over this
    sequence are exactly the values approached by real partitions.
    """
    out = []
    for i, b in enumerate(f.breakpoints):
        left, right = f.left_limit(i), f.right_limit(i)
        if left is not None:
            out.append(left)
        out.append(f.values[i])
        if right is not None:
            out.append(right)
            u, v = b, f.breakpoints[i + 1]
            out.append(f.seg_value(i, (u + v) / 2))
    return out


def _exhaustive_max(vals: Sequence[Rat], term: Callable[[Rat], Rat]) -> Rat:
    if len(vals) > EXHAUSTIVE_CAP:
        raise ValueError(f"exhaustive search capped at {EXHAUSTIVE_CAP} candidate values")
    best = ZERO
    n = len(vals)
    for size in range(2, n + 1):
        for idx in itertools.combinations(range(n), size):
            s = sum((term(vals[j] - vals[i]) for i, j in zip(idx, idx[1:])), ZERO)
            if s > best:
                best = s
    return best


def brute_force_variation(f: PiecewiseFn, method: str = "full") -> Rat:
    """Exact total variation, as the supremum over all partitions.

    ``method="full"`` sums over the whole limit-augmented candidate
    sequence (refinement never lowers a partition sum); ``"exhaustive"``
    maximises over every subsequence and is limited to small instances.
    """
    vals = limit_sequence(f)
    if method == "full":
        return _sum_abs(vals)
    if method == "exhaustive":
        return _exhaustive_max(vals, abs)
    raise ValueError(f"unknown method {method!r}")


def brute_force_positive_variation(f: PiecewiseFn, method: str = "full") -> Rat:
    vals = limit_sequence(f)
    if method == "full":
        return _sum_pos(vals)
    if method == "exhaustive":
        return _exhaustive_max(vals, lambda d: max(d, ZERO))
    raise ValueError(f"unknown method {method!r}")


def approach_partition(f: PiecewiseFn, eps: Rat) -> list[Rat]:
    """Real points realising the candidate sequence up to ``eps``.

    Each limit ``f(b-)``/``f(b+)`` is replaced by the point ``b -/+ eps``;
    ``eps`` must be below half of the smallest segment length.
    """
    pts = set()
    for i, b in enumerate(f.breakpoints):
        pts.add(b)
        if i > 0:
            pts.add(b - eps)
        if i < len(f.segments):
            pts.add(b + eps)
            pts.add((b + f.breakpoints[i + 1]) / 2)
    return sorted(pts)


# -- interval sources ---------------------------------------------------------
class IntervalSource(Protocol):
    def extrema(self, a: Rat, b: Rat) -> tuple[Rat, Rat]:
        """``(inf, sup)`` of the function over ``[a, b]``."""


class NativeIntervals:
    """Interval extrema read off the representation."""

    def __init__(self, f: PiecewiseFn | OpaqueFn):
        self.f = unseal(f)

    def extrema(self, a, b):
        return extrema_unchecked(self.f, a, b)


def as_source(f) -> IntervalSource:
    if isinstance(f, (PiecewiseFn, OpaqueFn)):
        return NativeIntervals(f)
    return f


def cell_extrema(f, n: int) -> list[tuple[Rat, Rat]]:
    src = as_source(f)
    return [src.extrema(Rat(k, n), Rat(k + 1, n)) for k in range(n)]


# -- trails -------------------------------------------------------------------
def _trail_sweep(cells: Iterable[tuple[Rat, Rat]]) -> Iterable[Rat]:
    # Two states: no pair open (best), or a low cell chosen (best_open = value - low).
    best = ZERO
    best_open = None
    for lo, hi in cells:
        closed = best if best_open is None else max(best, best_open + hi)
        opened = best - lo if best_open is None else max(best_open, best - lo)
        best, best_open = closed, opened
        yield best


def m_bar(f, n: int) -> Rat:
    """The positive n-move: best total rise over all n,f-trails (0 if none)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = ZERO
    for out in _trail_sweep(cell_extrema(f, n)):
        pass
    return out


def m_bar_profile(f, n: int) -> list[Rat]:
    """``M`` restricted to the prefixes ``[0, k/n]`` for ``k = 0..n``."""
    return [ZERO, *_trail_sweep(cell_extrema(f, n))]


def trail_value(f, trail: Trail) -> Rat | None:
    """Total rise of ``trail``, or ``None`` if it violates the trail condition."""
    src = as_source(f)
    total = ZERO
    for lo_k, hi_k in trail.pairs:
        lo = src.extrema(Rat(lo_k, trail.n), Rat(lo_k + 1, trail.n))[0]
        hi = src.extrema(Rat(hi_k, trail.n), Rat(hi_k + 1, trail.n))[1]
        if not lo < hi:
            return None
        total += hi - lo
    return total


def m_bar_exhaustive(f, n: int) -> tuple[Rat, Trail]:
    """Enumerate every n,f-trail; returns the best value and the
    lexicographically smallest trail attaining it."""
    cells = cell_extrema(f, n)
    best, best_idx = ZERO, ()
    for size in range(2, n + 1, 2):
        for idx in itertools.combinations(range(n), size):
            total = ZERO
            for j in range(0, size, 2):
                lo, hi = cells[idx[j]][0], cells[idx[j + 1]][1]
                if not lo < hi:
                    break
                total += hi - lo
            else:
                if total > best or (total == best and idx < best_idx):
                    best, best_idx = total, idx
    return best, Trail(n, best_idx)


def optimal_trail(f, n: int) -> Trail:
    """A maximal trail, lexicographically smallest among ties (quadratic in n)."""
    cells = cell_extrema(f, n)
    lo = [c[0] for c in cells]
    hi = [c[1] for c in cells]
    best = [ZERO] * (n + 2)
    for k in range(n - 1, -1, -1):
        b = best[k + 1]
        for j in range(k + 1, n):
            if hi[j] > lo[k]:
                b = max(b, hi[j] - lo[k] + best[j + 1])
        best[k] = b
    idx = []
    k = 0
    while k < n and best[k] > 0:
        found = False
        for i in range(k, n):
            for j in range(i + 1, n):
                if hi[j] > lo[i] and hi[j] - lo[i] + best[j + 1] == best[k]:
                    idx += [i, j]
                    k = j + 1
                    found = True
                    break
            if found:
                break
    return Trail(n, tuple(idx))


def rise_witness_n(f, P: Partition | Iterable[Rat], n_max: int) -> int | None:
    """Least ``n <= n_max`` whose positive n-move covers ``Var+(P, f)``."""
    target = var_plus_of_partition(unseal(f), P)
    for n in range(1, n_max + 1):
        if target <= m_bar(f, n):
            return n
    return None


# -- Delta via fine aligned grids ---------------------------------------------
@lru_cache(maxsize=256)
def _compressed_cells(base: int, doublings: int) -> tuple[tuple[tuple[Rat, Rat], ...], ...]:
    """Fine cells of width ``1/(base*2**doublings)`` kept next to base-grid points.

    On each base cell the function is affine on the open interior, so a best
    trail never needs a fine cell away from the ends of a base cell.
    """
    t = 2 ** doublings
    if t < 2 * EDGE_CELLS:
        raise ValueError("too few fine cells per base cell")
    n = base * t
    out = []
    for j in range(base):
        ks = list(range(j * t, j * t + EDGE_CELLS)) + list(range((j + 1) * t - EDGE_CELLS, (j + 1) * t))
        out.append(tuple((Rat(k, n), Rat(k + 1, n)) for k in ks))
    return tuple(out)


def compressed_profile(f, base: int, doublings: int) -> list[Rat]:
    """Trail maxima of every prefix ``[0, j/base]`` on the grid ``base*2**doublings``."""
    src = as_source(f)
    groups = _compressed_cells(base, doublings)
    prof = [ZERO]
    best = ZERO
    best_open = None
    for group in groups:
        for a, b in group:
            lo, hi = src.extrema(a, b)
            closed = best if best_open is None else max(best, best_open + hi)
            opened = best - lo if best_open is None else max(best_open, best - lo)
            best, best_open = closed, opened
        prof.append(best)
    return prof


def positive_variation_profile(f, base: int, level: int = FINE_LEVEL) -> list[Rat]:
    """Exact positive variation of ``f`` on ``[0, j/base]`` for ``j = 0..base``.

    ``base`` must be a grid containing every breakpoint of ``f``.
    """
    p0 = compressed_profile(f, base, level)
    p1 = compressed_profile(f, base, level + 1)
    p2 = compressed_profile(f, base, level + 2)
    e1 = [2 * b - a for a, b in zip(p0, p1)]
    e2 = [2 * b - a for a, b in zip(p1, p2)]
    if e1 != e2:
        raise ConvergenceError(f"trail maxima not yet affine in 1/n at level {level}")
    return e2


def delta(f: PiecewiseFn, witness: BVWitness | None = None) -> Rat:
    """Positive variation ``sup_P Var+(P, f)`` computed from trail maxima."""
    f = unseal(f)
    value = positive_variation_profile(f, grid_resolution(f))[-1]
    if witness is not None and not witness.admits(value):
        raise WitnessViolation(f"positive variation {format_rat(value)} exceeds witness {witness}")
    return value


# -- Jordan decomposition from Delta ------------------------------------------
def _build_pair(evaluate_at: Callable[[Rat], Rat], coarse: int, prof: Sequence[Rat]) -> tuple[PiecewiseFn, PiecewiseFn]:
    """Assemble ``g = f(0) + P`` and ``h = g - f`` on a grid of ``coarse`` cells.

    ``prof`` holds ``P`` (positive variation of prefixes) at multiples of
    ``1/(4*coarse)``; on each coarse cell both ``f`` and ``P`` are affine on
    the open interior, so two interior samples fix each piece.
    """
    f0 = evaluate_at(ZERO)
    bps, g_segs, h_segs, g_vals, h_vals = [], [], [], [], []
    width = Rat(1, coarse)
    quarter = width / 4
    for j in range(coarse + 1):
        x = Rat(j, coarse)
        bps.append(x)
        p = prof[4 * j]
        fx = evaluate_at(x)
        g_vals.append(f0 + p)
        h_vals.append(f0 + p - fx)
        if j == coarse:
            break
        p1, p2, p3 = prof[4 * j + 1], prof[4 * j + 2], prof[4 * j + 3]
        if p2 - p1 != p3 - p2:
            raise ConvergenceError(f"positive variation not affine on cell {j}/{coarse}")
        q1, q2 = x + quarter, x + 2 * quarter
        f1, f2 = evaluate_at(q1), evaluate_at(q2)
        p_slope = (p2 - p1) / quarter
        f_slope = (f2 - f1) / quarter
        p_start = p1 - p_slope * quarter
        f_start = f1 - f_slope * quarter
        g_segs.append((f0 + p_start, p_slope))
        h_segs.append((f0 + p_start - f_start, p_slope - f_slope))
    g = PiecewiseFn(tuple(bps), tuple(g_segs), tuple(g_vals))
    h = PiecewiseFn(tuple(bps), tuple(h_segs), tuple(h_vals))
    return simplify(g), simplify(h)


def jordan_from_profile(evaluate_at: Callable[[Rat], Rat], source, coarse: int, level: int = FINE_LEVEL) -> MonotonePair:
    prof = positive_variation_profile(source, 4 * coarse, level)
    g, h = _build_pair(evaluate_at, coarse, prof)
    return MonotonePair(g, h)


def jordan_from_delta(f: PiecewiseFn | OpaqueFn) -> MonotonePair:
    """Jordan decomposition ``f = g - h`` with ``g - f(0)`` the positive
    variation of ``f`` on ``[0, x]``."""
    f = unseal(f)
    return jordan_from_profile(lambda x: evaluate(f, x), NativeIntervals(f), grid_resolution(f))


def variation_report(f: PiecewiseFn) -> dict[str, Rat]:
    total, pos = structural_variation(f)
    return {"total": total, "positive": pos, "negative": total - pos}
