"""Realiser oracles for bounded-variation functions and the reductions between them.

Oracles are plain callables:

* sup oracle          ``S(f) -> sup of f on [0,1]``
* Jordan oracle       ``J(f) -> MonotonePair``
* weak Jordan oracle  ``Jw(f, V) -> MonotonePair`` given the exact variation ``V``
* continuity oracle   ``L(f) -> ascending list of discontinuity points``

Functions may be passed as :class:`PiecewiseFn` or as :class:`OpaqueFn`.
:func:`jordan_from_sup` works on the opaque view only: every fact it learns
about ``f`` comes from evaluations and sup-oracle answers.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Union

from .bvfun import (
    MonotonePair,
    OpaqueFn,
    PiecewiseFn,
    candidate_points,
    constant,
    discontinuities,
    denominator_bound,
    evaluate,
    evaluate_sorted,
    grid_resolution,
    monotonicity_violations,
    negate,
    simplify,
    subtract,
    sup_interval,
    unseal,
)
from .exactnum import Rat, ONE, ZERO, farey, format_rat
from .variation import FINE_LEVEL, brute_force_variation, jordan_from_delta, jordan_from_profile

Fn = Union[PiecewiseFn, OpaqueFn]
SupOracle = Callable[[Fn], Rat]
JordanOracle = Callable[[Fn], MonotonePair]
WeakJordanOracle = Callable[[Fn, Rat], MonotonePair]
ContinuityOracle = Callable[[Fn], list]


class NotMonotoneError(ValueError):
    pass


class InsufficientResolution(ValueError):
    """The rational enumeration is too coarse to see every breakpoint."""


class OracleFailure(RuntimeError):
    pass


# -- native oracles -----------------------------------------------------------
def native_sup(f: Fn) -> Rat:
    return sup_interval(unseal(f), ZERO, ONE)


def native_continuity(f: Fn) -> list[Rat]:
    return discontinuities(unseal(f))


def native_jordan(f: Fn) -> MonotonePair:
    return jordan_from_delta(f)


def native_weak_jordan(f: Fn, variation: Rat) -> MonotonePair:
    """Weak Jordan realiser: only defined when ``variation`` is the exact variation."""
    fn = unseal(f)
    actual = brute_force_variation(fn)
    if Rat(variation) != actual:
        raise OracleFailure(f"weak Jordan input variation {format_rat(variation)} is not V(f)={format_rat(actual)}")
    return jordan_from_delta(fn)


# -- discontinuities of monotone functions ------------------------------
@dataclass(frozen=True)
class GapWitness:
    """A gap ``(p, r)`` in the range of ``f`` with the two expressions for its location."""

    p: Rat
    r: Rat
    sup_form: Rat
    inf_form: Rat

    @property
    def agrees(self) -> bool:
        return self.sup_form == self.inf_form


@dataclass
class _Samples:
    qs: list  # enumerated rationals q_i, ascending
    vals: list  # a_i = f(q_i)
    lims: list  # (f(q_i+), f(q_{i+1}-)) on each open gap between enumerated points


def _sample(f: Callable[[Rat], Rat], denom_bound: int, sorted_eval=None) -> _Samples:
    qs = farey(denom_bound)
    vals = sorted_eval(qs) if sorted_eval else [f(q) for q in qs]
    inner = []
    for a, b in zip(qs, qs[1:]):
        step = (b - a) / 3
        inner += [a + step, a + 2 * step]
    ivals = sorted_eval(inner) if sorted_eval else [f(t) for t in inner]
    lims = []
    for i, (a, b) in enumerate(zip(qs, qs[1:])):
        v1, v2 = ivals[2 * i], ivals[2 * i + 1]
        # affine between consecutive enumerated points once they contain every breakpoint
        lims.append((2 * v1 - v2, 2 * v2 - v1))
    return _Samples(qs, vals, lims)


def _range_gaps(s: _Samples) -> list[tuple[Rat, Rat]]:
    """Maximal open intervals free of values ``f(q)``, ``q`` ranging over all rationals.

    On an open gap ``(q_i, q_{i+1})`` the values at rationals are dense in the
    open interval between the two one-sided limits.
    """
    pieces = [(v, v) for v in s.vals]
    for lo, hi in s.lims:
        pieces.append((min(lo, hi), max(lo, hi)))
    pieces.sort()
    gaps = []
    reach = pieces[0][1]
    for lo, hi in pieces[1:]:
        if lo > reach:
            gaps.append((reach, lo))
        reach = max(reach, hi)
    return gaps


def _sup_at_most(s: _Samples, p: Rat) -> Rat | None:
    """``sup{q rational : f(q) <= p}`` for non-decreasing ``f``."""
    best = None
    for q, v in zip(s.qs, s.vals):
        if v <= p:
            best = q
    for i, (lo, hi) in enumerate(s.lims):
        a, b = s.qs[i], s.qs[i + 1]
        if lo >= p and not (lo == hi == p):
            continue
        if hi <= p:
            x = b
        else:
            x = a + (p - lo) / (hi - lo) * (b - a)
        best = x if best is None else max(best, x)
    return best


def _inf_at_least(s: _Samples, r: Rat) -> Rat | None:
    """``inf{q rational : f(q) >= r}`` for non-decreasing ``f``."""
    best = None
    for q, v in zip(reversed(s.qs), reversed(s.vals)):
        if v >= r:
            best = q
    for i, (lo, hi) in enumerate(s.lims):
        a, b = s.qs[i], s.qs[i + 1]
        if hi <= r and not (lo == hi == r):
            continue
        if lo >= r:
            x = a
        else:
            x = a + (r - lo) / (hi - lo) * (b - a)
        best = x if best is None else min(best, x)
    return best


def range_gaps(f: PiecewiseFn, increasing: bool = True, denom_bound: int | None = None) -> tuple[list[GapWitness], _Samples]:
    fn = unseal(f)
    if not increasing:
        fn = negate(fn)
    problems = monotonicity_violations(fn)
    if problems:
        direction = "non-decreasing" if increasing else "non-increasing"
        raise NotMonotoneError(f"function is not {direction}: {problems[0]}")
    need = denominator_bound(fn)
    if denom_bound is None:
        denom_bound = need
    elif denom_bound < need:
        raise InsufficientResolution(f"denominator bound {denom_bound} < required {need}")
    s = _sample(None, denom_bound, lambda xs: evaluate_sorted(fn, xs))
    out = []
    for p, r in _range_gaps(s):
        out.append(GapWitness(p, r, _sup_at_most(s, p), _inf_at_least(s, r)))
    return out, s


def enumerate_monotone_discontinuities(f: Fn, increasing: bool = True, denom_bound: int | None = None) -> list[Rat]:
    """Discontinuities of a monotone function, located through gaps in its range.

    Rationals up to denominator ``denom_bound`` are enumerated; each gap
    ``(p, r)`` in the set of values is located at ``sup{q : f(q) <= p}``,
    which must coincide with ``inf{q : f(q) >= r}``.  Points where both
    one-sided limits match the value are dropped.
    """
    gaps, s = range_gaps(f, increasing, denom_bound)
    index = {q: i for i, q in enumerate(s.qs)}
    found = set()
    for gap in gaps:
        if not gap.agrees:
            raise OracleFailure(
                f"gap ({format_rat(gap.p)}, {format_rat(gap.r)}) located at both "
                f"{format_rat(gap.sup_form)} and {format_rat(gap.inf_form)}"
            )
        found.add(gap.sup_form)
    out = []
    for x in sorted(found):
        i = index.get(x)
        if i is None:
            continue
        v = s.vals[i]
        left = s.lims[i - 1][1] if i > 0 else v
        right = s.lims[i][0] if i < len(s.lims) else v
        if left != v or right != v:
            out.append(x)
    return out


# -- reductions ----------------------------------------------------------------
def _limits(p: PiecewiseFn, x: Rat):
    left, v, right = p.limits_at(x)
    return left, v, right


def continuity_from_jordan(J: JordanOracle, denom_bound: int | None = None) -> ContinuityOracle:
    """Discontinuities of ``f`` from the jumps of a Jordan decomposition ``(g, h)``."""

    def L(f: Fn) -> list[Rat]:
        pair = J(f)
        pts = set(enumerate_monotone_discontinuities(pair.g, True, denom_bound))
        pts |= set(enumerate_monotone_discontinuities(pair.h, True, denom_bound))
        out = []
        for x in sorted(pts):
            gl, gv, gr = _limits(pair.g, x)
            hl, hv, hr = _limits(pair.h, x)
            fv = f(x)
            left = None if gl is None else gl - hl
            right = None if gr is None else gr - hr
            if (left is not None and left != fv) or (right is not None and right != fv):
                out.append(x)
        return out

    return L


def sup_from_continuity(L: ContinuityOracle) -> SupOracle:
    """``sup f`` as a maximum over the listed discontinuities and the segment limits.

    The segment limits play the part of the dense rationals: away from the
    listed points the supremum is approached along linear pieces.
    """

    def S(f: Fn) -> Rat:
        fn = unseal(f)
        cands = [fn(x) for x in L(f)]
        for i in range(fn.n_segments):
            cands += [fn.seg_start(i), fn.seg_end(i)]
        return max(cands)

    return S


class SupQueries:
    """Interval extrema ``S+[a,b]`` and ``S-[a,b]`` answered by a sup oracle.

    ``S-[a,b](f) = -S+[a,b](-f)``; both reparametrise ``[a, b]`` onto [0,1]
    through the opaque view.  Keeps call counts and an optional trace.
    """

    def __init__(self, S: SupOracle, f: OpaqueFn, trace: list | None = None):
        self.S = S
        self.f = f
        self.calls = 0
        self.trace = trace

    def extrema(self, a: Rat, b: Rat) -> tuple[Rat, Rat]:
        piece = self.f.reparam(a, b)
        hi = self.S(piece)
        lo = -self.S(piece.negate())
        self.calls += 2
        if self.trace is not None:
            self.trace.append(f"S+[{format_rat(a)},{format_rat(b)}] = {format_rat(hi)}")
            self.trace.append(f"S-[{format_rat(a)},{format_rat(b)}] = {format_rat(lo)}")
        return lo, hi


@dataclass
class QueryLog:
    sup_calls: int = 0
    evaluations: int = 0
    lines: list = field(default_factory=list)


def as_opaque(f: Fn) -> OpaqueFn:
    if isinstance(f, OpaqueFn):
        return f
    return OpaqueFn(f, grid_resolution(f))


def jordan_from_sup(S: SupOracle, log: QueryLog | None = None, trace: bool = False, level: int = FINE_LEVEL) -> JordanOracle:
    """Jordan realiser built from a sup oracle by way of n,f-trails.

    ``f`` is used only through evaluation and oracle queries; its ``grid``
    hint fixes the aligned grid the trails run on.
    """

    def J(f: Fn) -> MonotonePair:
        opaque = as_opaque(f)
        if opaque.grid is None:
            raise OracleFailure("opaque function carries no grid hint")
        src = SupQueries(S, opaque, [] if trace else None)
        evals = 0

        def at(x):
            nonlocal evals
            evals += 1
            return opaque(x)

        pair = jordan_from_profile(at, src, opaque.grid, level)
        if log is not None:
            log.sup_calls += src.calls
            log.evaluations += evals
            if src.trace:
                log.lines += src.trace
        return pair

    return J


# -- verification ---------------------------------------------------------------
@dataclass
class Verdict:
    ok: bool
    violations: list[str]

    def __bool__(self):
        return self.ok


def random_rationals(count: int, seed: int = 0, max_denominator: int = 2 ** 10) -> list[Rat]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        d = rng.randint(1, max_denominator)
        out.append(Rat(rng.randint(0, d), d))
    return out


def check_monotone_pair(f: Fn, pair: MonotonePair, samples: int = 1000, seed: int = 0) -> Verdict:
    """Both parts non-decreasing and ``f = g - h`` at candidate and sampled points."""
    fn = unseal(f)
    bad = [f"g: {v}" for v in monotonicity_violations(pair.g)]
    bad += [f"h: {v}" for v in monotonicity_violations(pair.h)]
    pts = set(candidate_points(fn)) | set(candidate_points(pair.g)) | set(candidate_points(pair.h))
    pts |= set(random_rationals(samples, seed))
    for x in sorted(pts):
        if evaluate(pair.g, x) - evaluate(pair.h, x) != evaluate(fn, x):
            bad.append(f"g - h != f at {format_rat(x)}")
            if len(bad) > 20:
                break
    if not bad and simplify(subtract(subtract(pair.g, pair.h), fn)) != constant(0):
        bad.append("g - h differs from f as a function")
    return Verdict(not bad, bad)
