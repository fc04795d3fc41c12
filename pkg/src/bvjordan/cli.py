"""Command-line front end.

    bvjordan eval --input f.txt --at 1/3
    bvjordan jordan --input f.txt
    bvjordan encode --set a.txt > f.txt && bvjordan recover --input f.txt
    bvjordan demo-equivalence --seed 0
    bvjordan selftest --seed 0

Exit codes: 0 ok, 1 usage, 2 parse error, 3 invariant violation, 4 oracle failure.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .bvfun import (
    FunctionFormatError,
    PiecewiseFn,
    discontinuities,
    evaluate,
    format_function,
    parse_function,
    sup_interval,
)
from .corpus import build_corpus
from .countable import (
    CollisionNotFound,
    CountableSetRepr,
    collision_from_rational_valued,
    continuity_point_not_in_set,
    encode_set,
    encode_witness,
    format_set,
    nin_to_cantor,
    parse_set,
    recover_enumeration,
    riemann_zero_point,
)
from .exactnum import Rat, ZERO, format_decimal, format_rat, rat
from .realisers import (
    InsufficientResolution,
    NotMonotoneError,
    OracleFailure,
    QueryLog,
    as_opaque,
    check_monotone_pair,
    continuity_from_jordan,
    jordan_from_sup,
    native_jordan,
    native_sup,
    sup_from_continuity,
)
from .selftest import CRITERIA, format_report, run_selftest
from .variation import ConvergenceError, WitnessViolation, brute_force_variation, delta, jordan_from_delta, m_bar

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INVARIANT, EXIT_ORACLE = 0, 1, 2, 3, 4

VERBS = ("eval", "var", "delta", "jordan", "discont", "sup", "encode", "recover", "cantor", "demo-equivalence", "selftest")


class UsageError(Exception):
    pass


class InvariantError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bvjordan", description="Exact variation, Jordan decompositions and realiser reductions.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("--input", metavar="PATH", help="function file")
    p.add_argument("--set", metavar="PATH", help="countable-set file")
    p.add_argument("--at", metavar="RAT", help="evaluation point")
    p.add_argument("--denom-bound", type=int, default=64, metavar="N", help="rational enumeration bound D (default 64)")
    p.add_argument("--nmax", type=int, default=64, metavar="N", help="largest trail grid checked (default 64)")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--format", choices=("exact", "exact+decimal"), default="exact")
    p.add_argument("--method", choices=("continuity", "nin", "collision", "zero"), default="continuity",
                   help="construction used by 'cantor' (default continuity)")
    p.add_argument("--only", type=int, action="append", metavar="K", help="selftest: run criterion K only (repeatable)")
    p.add_argument("--trace", metavar="PATH", help="write the oracle trace log here")
    return p


class Runner:
    def __init__(self, args):
        self.args = args
        self.out: list[str] = []
        self.trace: list[str] = []

    # -- helpers --
    def num(self, x: Rat) -> str:
        s = format_rat(x)
        if self.args.format == "exact+decimal":
            s += f" (approx {format_decimal(x)})"
        return s

    def emit(self, line: str = ""):
        self.out.append(line)

    def _read(self, path: str | None, flag: str) -> str:
        if not path:
            raise UsageError(f"{self.args.verb} needs {flag}")
        try:
            with open(path, encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None

    def function(self) -> PiecewiseFn:
        return parse_function(self._read(self.args.input, "--input"))

    def countable_set(self) -> CountableSetRepr:
        return parse_set(self._read(self.args.set, "--set"))

    # -- verbs --
    def do_eval(self):
        f = self.function()
        if self.args.at is None:
            raise UsageError("eval needs --at")
        self.emit(self.num(evaluate(f, rat(self.args.at))))

    def do_var(self):
        self.emit(self.num(brute_force_variation(self.function())))

    def do_delta(self):
        self.emit(self.num(delta(self.function())))

    def do_jordan(self):
        f = self.function()
        pair = jordan_from_delta(f)
        verdict = check_monotone_pair(f, pair, seed=self.args.seed)
        if not verdict:
            raise InvariantError(f"jordan: f = g - h with g, h non-decreasing: {verdict.violations[0]}")
        self.emit("# g")
        self.out += format_function(pair.g).splitlines()
        self.emit("# h")
        self.out += format_function(pair.h).splitlines()

    def do_discont(self):
        f = self.function()
        L = continuity_from_jordan(native_jordan, self.args.denom_bound)
        for x in L(f):
            self.emit(format_rat(x))

    def do_sup(self):
        f = self.function()
        S = sup_from_continuity(continuity_from_jordan(native_jordan, self.args.denom_bound))
        value = S(f)
        if value != sup_interval(f, 0, 1):
            raise InvariantError("sup: reduction disagrees with the direct supremum")
        self.emit(self.num(value))

    def do_encode(self):
        A = self.countable_set()
        f = encode_set(A)
        self.emit(f"# witness {encode_witness(A)}; tail bound {format_rat(A.tail_bound)}")
        self.out += format_function(f).splitlines()

    def do_recover(self):
        f = encode_set(self.countable_set()) if self.args.set and not self.args.input else self.function()
        if any(s != (ZERO, ZERO) for s in f.segments) or any(v < 0 for v in f.values):
            raise InvariantError("recover: input must be a spike encoding (zero baseline, non-negative spikes)")
        for x in recover_enumeration(f, native_jordan, self.args.denom_bound):
            self.emit(format_rat(x))

    def do_cantor(self):
        A = self.countable_set()
        method = self.args.method
        if method == "continuity":
            x = continuity_point_not_in_set(A)
        elif method == "nin":
            x = nin_to_cantor(None, A)
        elif method == "zero":
            x = riemann_zero_point(encode_set(A))
        else:
            x, y = collision_from_rational_valued(encode_set(A))
            self.emit(f"{format_rat(x)} {format_rat(y)}")
            return
        if x in A:
            raise InvariantError(f"cantor: output {format_rat(x)} lies in A")
        self.emit(format_rat(x))

    def do_demo_equivalence(self):
        if self.args.input:
            items = [("input", self.function())]
        else:
            items = [(inst.ident, inst.f) for inst in build_corpus(self.args.seed, 20)]
        L = continuity_from_jordan(native_jordan, self.args.denom_bound)
        S = sup_from_continuity(L)
        log = QueryLog()
        J = jordan_from_sup(S, log=log, trace=bool(self.args.trace))
        failed = 0
        for ident, f in items:
            calls_before = log.sup_calls
            disc = L(f)
            ok_disc = disc == discontinuities(f)
            sup = S(f)
            ok_sup = sup == native_sup(f)
            d = delta(f)
            ok_mbar = all(m_bar(f, n) <= d for n in range(1, self.args.nmax + 1))
            self.trace.append(f"## {ident}")
            start = len(log.lines)
            ok_jordan = bool(check_monotone_pair(f, J(as_opaque(f)), seed=self.args.seed))
            self.trace += log.lines[start:]
            verdicts = [("continuity", ok_disc), ("sup", ok_sup), ("mbar<=delta", ok_mbar), ("jordan", ok_jordan)]
            failed += not all(ok for _, ok in verdicts)
            stages = " ".join(f"{name}={'ok' if ok else 'FAIL'}" for name, ok in verdicts)
            self.emit(f"{ident}: {stages} sup={format_rat(sup)} delta={format_rat(d)} "
                      f"discontinuities={len(disc)} sup_calls={log.sup_calls - calls_before}")
        self.emit(f"total sup-oracle calls {log.sup_calls}, evaluations {log.evaluations}")
        self.trace.append(f"total sup-oracle calls {log.sup_calls}")
        if failed:
            raise InvariantError(f"demo-equivalence: {failed} instance(s) failed a stage")

    def do_selftest(self):
        unknown = set(self.args.only or ()) - set(CRITERIA)
        if unknown:
            raise UsageError(f"selftest: no criterion {min(unknown)}")
        results = run_selftest(self.args.seed, self.args.only, nmax=self.args.nmax, denom_bound=self.args.denom_bound)
        self.out += format_report(results, self.args.seed).splitlines()
        if not all(r.ok for r in results):
            raise InvariantError("selftest: some criteria failed")

    def run(self) -> int:
        getattr(self, "do_" + self.args.verb.replace("-", "_"))()
        return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error already reported by argparse
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    runner = Runner(args)
    code = EXIT_OK
    message = None
    try:
        code = runner.run()
    except UsageError as exc:
        code, message = EXIT_USAGE, str(exc)
    except FunctionFormatError as exc:
        code, message = EXIT_PARSE, f"{args.verb}: parse error: {exc}"
    except (OracleFailure, ConvergenceError, InsufficientResolution, CollisionNotFound) as exc:
        code, message = EXIT_ORACLE, f"{args.verb}: oracle failure: {exc}"
    except (InvariantError, WitnessViolation, NotMonotoneError) as exc:
        code, message = EXIT_INVARIANT, str(exc)
    except (ValueError, ArithmeticError, TypeError) as exc:
        code, message = EXIT_INVARIANT, f"{args.verb}: precondition violated: {exc}"
    if runner.out:
        sys.stdout.write("\n".join(runner.out) + "\n")
    if args.trace and runner.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("\n".join(runner.trace) + "\n")
    if message:
        print(f"bvjordan: error: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
