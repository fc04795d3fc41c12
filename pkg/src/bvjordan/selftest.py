"""Acceptance checks over the seeded corpora, one report line per criterion.

The report holds only seed-determined content (counts and exact values), so
two runs with the same seed print the same bytes.  Wall-clock times are
collected separately in :attr:`CriterionResult.seconds`.
"""
from __future__ import annotations

import hashlib
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .bvfun import candidate_points, discontinuities, evaluate, is_continuous_at, separating_n
from .corpus import build_corpus, monotone_staircases, random_sets
from .countable import (
    collision_from_rational_valued,
    continuity_point_not_in_set,
    encode_set,
    nin_to_cantor,
    recover_enumeration,
    recovery_candidates,
    riemann_bound_report,
    riemann_zero_point,
)
from .exactnum import format_rat
from .realisers import (
    as_opaque,
    check_monotone_pair,
    continuity_from_jordan,
    enumerate_monotone_discontinuities,
    jordan_from_sup,
    range_gaps,
    native_jordan,
    native_sup,
    sup_from_continuity,
)
from .variation import (
    brute_force_positive_variation,
    rise_witness_n,
    delta,
    jordan_from_delta,
    m_bar,
    m_bar_exhaustive,
)

N_MAX = 64
TRAIL_ORACLE_N = 12
PARTITIONS_PER_FUNCTION = 20
ENUM_DENOM = 64
RIEMANN_KMAX = 10


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    detail: str
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.number:>2} {self.title}: {self.detail}"


def _rng(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


class Context:
    """Seeded instances shared by the criteria; built lazily."""

    def __init__(self, seed: int = 0, nmax: int = N_MAX, denom_bound: int = ENUM_DENOM):
        self.seed = seed
        self.nmax = nmax
        self.denom_bound = denom_bound
        self._corpus = None
        self._deltas = None

    @property
    def corpus(self):
        if self._corpus is None:
            self._corpus = build_corpus(self.seed)
        return self._corpus

    @property
    def deltas(self):
        if self._deltas is None:
            self._deltas = {inst.ident: delta(inst.f) for inst in self.corpus}
        return self._deltas


def _result(number, title, failures, checked, what):
    ok = not failures
    detail = f"{checked - len(failures)}/{checked} {what}"
    if failures:
        detail += f"; first failure {failures[0]}"
    return CriterionResult(number, title, ok, detail, failures)


def c1_variation_oracles(ctx: Context) -> CriterionResult:
    bad = []
    total = 0
    for inst in ctx.corpus:
        d = ctx.deltas[inst.ident]
        total += d
        if d != brute_force_positive_variation(inst.f):
            bad.append(inst.ident)
    r = _result(1, "delta = brute-force positive variation", bad, len(ctx.corpus), "functions")
    r.detail += f"; sum of deltas {format_rat(total)}"
    return r


def c2_mbar_below_delta(ctx: Context) -> CriterionResult:
    bad = []
    for inst in ctx.corpus:
        d = ctx.deltas[inst.ident]
        for n in range(1, ctx.nmax + 1):
            if m_bar(inst.f, n) > d:
                bad.append(f"{inst.ident} n={n}")
                break
    return _result(2, f"M(n,f) <= delta(f) for n <= {ctx.nmax}", bad, len(ctx.corpus), "functions")


def c3_rise_witness(ctx: Context) -> CriterionResult:
    rng = _rng(ctx.seed, "partitions")
    bad = []
    used = 0
    for inst in ctx.corpus:
        cands = candidate_points(inst.f)
        inner = cands[1:-1]
        limit = separating_n(inst.f)
        for _ in range(PARTITIONS_PER_FUNCTION):
            pts = sorted({cands[0], cands[-1], *rng.sample(inner, rng.randint(0, len(inner)))})
            n = rise_witness_n(inst.f, pts, limit)
            if n is None:
                bad.append(f"{inst.ident} P={[format_rat(p) for p in pts]}")
            else:
                used = max(used, n)
    r = _result(3, "Var+(P,f) <= M(n,f) for some n <= separating_n(f)", bad, len(ctx.corpus), "functions")
    r.detail += f" x {PARTITIONS_PER_FUNCTION} partitions; largest n needed {used}"
    return r


def c4_trail_dp(ctx: Context) -> CriterionResult:
    bad = []
    for inst in ctx.corpus:
        for n in range(1, TRAIL_ORACLE_N + 1):
            if m_bar(inst.f, n) != m_bar_exhaustive(inst.f, n)[0]:
                bad.append(f"{inst.ident} n={n}")
                break
    return _result(4, f"trail DP = exhaustive trails for n <= {TRAIL_ORACLE_N}", bad, len(ctx.corpus), "functions")


def c5_jordan(ctx: Context) -> CriterionResult:
    bad = []
    J = jordan_from_sup(native_sup)
    for inst in ctx.corpus:
        v = check_monotone_pair(inst.f, jordan_from_delta(inst.f), seed=ctx.seed)
        if not v:
            bad.append(f"{inst.ident} (delta route) {v.violations[0]}")
        v = check_monotone_pair(inst.f, J(as_opaque(inst.f)), seed=ctx.seed)
        if not v:
            bad.append(f"{inst.ident} (blind route) {v.violations[0]}")
    return _result(5, "Jordan pairs valid (delta route and blind sup route)", bad, len(ctx.corpus), "functions")


def c6_range_gaps(ctx: Context) -> CriterionResult:
    fns = monotone_staircases(ctx.seed)
    bad = []
    gaps = 0
    for k, f in enumerate(fns):
        found = enumerate_monotone_discontinuities(f, True, ctx.denom_bound)
        if found != discontinuities(f):
            bad.append(f"staircase {k}: jump set")
            continue
        ws, _ = range_gaps(f, True, ctx.denom_bound)
        gaps += len(ws)
        if not all(w.agrees for w in ws):
            bad.append(f"staircase {k}: sup/inf forms differ")
    r = _result(6, f"range-gap enumeration at D={ctx.denom_bound} finds every jump", bad, len(fns), "staircases")
    r.detail += f"; {gaps} gaps, sup form = inf form on all"
    return r


def c7_equivalence(ctx: Context) -> CriterionResult:
    L = continuity_from_jordan(native_jordan)
    S = sup_from_continuity(L)
    J = jordan_from_sup(S)
    bad = []
    for inst in ctx.corpus:
        if S(inst.f) != native_sup(inst.f):
            bad.append(f"{inst.ident} sup")
        if L(inst.f) != discontinuities(inst.f):
            bad.append(f"{inst.ident} discontinuities")
        v = check_monotone_pair(inst.f, J(as_opaque(inst.f)), seed=ctx.seed)
        if not v:
            bad.append(f"{inst.ident} jordan {v.violations[0]}")
    return _result(7, "Jordan -> continuity -> sup -> Jordan cycle", bad, len(ctx.corpus), "functions")


def c8_round_trip(ctx: Context) -> CriterionResult:
    sets = random_sets(ctx.seed)
    bad = []
    members = 0
    for k, A in enumerate(sets):
        f = encode_set(A)
        members += len(A)
        if recover_enumeration(f, native_jordan) != list(A.points):
            bad.append(f"set {k}: recovered set differs")
            continue
        pair, cands = recovery_candidates(f, native_jordan)
        for x in cands:
            if (x in A) != (evaluate(pair.g, x) != evaluate(pair.h, x)):
                bad.append(f"set {k}: membership criterion fails at {format_rat(x)}")
                break
    r = _result(8, "encode/recover round trip and membership criterion", bad, len(sets), "sets")
    r.detail += f"; {members} members"
    return r


def c9_uncountability(ctx: Context) -> CriterionResult:
    sets = random_sets(ctx.seed + 1)
    bad = []
    shared = 0
    rows = 0
    for k, A in enumerate(sets):
        f = encode_set(A)
        x = continuity_point_not_in_set(A)
        if x in A or not is_continuous_at(f, x):
            bad.append(f"set {k}: continuity point {format_rat(x)}")
        x = nin_to_cantor(None, A)
        if x in A:
            bad.append(f"set {k}: Cantor point {format_rat(x)}")
        x, y = collision_from_rational_valued(f)
        if x == y or evaluate(f, x) != evaluate(f, y):
            bad.append(f"set {k}: collision")
        y = riemann_zero_point(f)
        if evaluate(f, y) != 0 or y in A:
            bad.append(f"set {k}: zero point {format_rat(y)}")
        for row in riemann_bound_report(A, RIEMANN_KMAX):
            rows += 1
            if not row.safe_bound_ok or (row.distinct_tags and not row.tight_bound_ok):
                bad.append(f"set {k}: Riemann bound at k={row.k}")
            if not row.tight_bound_ok:
                shared += 1
    r = _result(9, "points outside A, collisions, zeros and Riemann bounds", bad, len(sets), "sets")
    r.detail += f"; {rows} meshes, 2^-k exceeded only with shared tags ({shared}), 2^(1-k) always holds"
    return r


CRITERIA: dict[int, Callable[[Context], CriterionResult]] = {
    1: c1_variation_oracles,
    2: c2_mbar_below_delta,
    3: c3_rise_witness,
    4: c4_trail_dp,
    5: c5_jordan,
    6: c6_range_gaps,
    7: c7_equivalence,
    8: c8_round_trip,
    9: c9_uncountability,
}


def run_criterion(number: int, ctx: Context) -> CriterionResult:
    start = time.perf_counter()
    try:
        r = CRITERIA[number](ctx)
    except Exception as exc:  # a crash is a failed criterion, not a crashed report
        r = CriterionResult(number, CRITERIA[number].__name__, False, f"error: {type(exc).__name__}: {exc}")
    r.seconds = time.perf_counter() - start
    return r


def run_selftest(seed: int = 0, only=None, nmax: int = N_MAX, denom_bound: int = ENUM_DENOM) -> list[CriterionResult]:
    ctx = Context(seed, nmax, denom_bound)
    numbers = sorted(only) if only else sorted(CRITERIA)
    return [run_criterion(k, ctx) for k in numbers]


def format_report(results: list[CriterionResult], seed: int = 0) -> str:
    lines = [f"selftest seed={seed}"]
    lines += [r.line() for r in results]
    body = "\n".join(lines)
    digest = hashlib.sha256(body.encode()).hexdigest()[:16]
    passed = sum(r.ok for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed; report digest {digest}")
    return "\n".join(lines) + "\n"
