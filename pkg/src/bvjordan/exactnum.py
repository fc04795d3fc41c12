"""Exact rationals and partitions of the unit interval.

Every coordinate and value in the package is a ``Rat``: gmpy2's ``mpq``,
an arbitrary-precision rational kept in lowest terms.  It interoperates with
:class:`fractions.Fraction` (equal values compare and hash equal), so callers
may pass either.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction

from math import gcd
from typing import Iterable, Iterator, Union

from gmpy2 import mpq

Rat = mpq
RatType = type(mpq(0))
RatLike = Union[Fraction, int, str, RatType]

ZERO = Rat(0)
ONE = Rat(1)

_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "−": operator.sub,
    "*": operator.mul,
    "×": operator.mul,
    "/": operator.truediv,
    "÷": operator.truediv,
}


class ExactArithmeticError(ArithmeticError):
    pass


def rat(value: RatLike) -> Rat:
    """Coerce ``value`` to a ``Rat``; floats are rejected to keep results exact."""
    if type(value) is RatType:
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string such as '1/3'")
    if isinstance(value, str):
        try:
            return Rat(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    if isinstance(value, Fraction):
        return Rat(value.numerator, value.denominator)
    if isinstance(value, int):
        return Rat(value)
    raise TypeError(f"cannot make a rational from {type(value).__name__}")


def rat_arith(a: RatLike, b: RatLike, op: str) -> Rat:
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None
    a, b = rat(a), rat(b)
    if fn is operator.truediv and b == 0:
        raise ExactArithmeticError("division by zero")
    return fn(a, b)


def format_rat(x: RatLike) -> str:
    """``p/q`` with the denominator dropped when it is 1."""
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x: Rat, digits: int = 12) -> str:
    """Decimal approximation to ``digits`` significant digits (display only)."""
    return f"{float(x):.{digits}g}"


def in_unit(x: Rat) -> bool:
    return ZERO <= x <= ONE


def check_unit(x: RatLike, name: str = "x") -> Rat:
    x = rat(x)
    if not in_unit(x):
        raise ValueError(f"{name}={format_rat(x)} lies outside [0,1]")
    return x


@dataclass(frozen=True)
class Partition:
    """Strictly increasing points ``0 = x0 < ... < xn = 1``."""

    points: tuple[Rat, ...]

    def __post_init__(self):
        pts = tuple(rat(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ValueError("a partition needs at least the points 0 and 1")
        if pts[0] != 0 or pts[-1] != 1:
            raise ValueError("a partition must start at 0 and end at 1")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("partition points must be strictly increasing")

    @classmethod
    def of(cls, points: Iterable[RatLike]) -> "Partition":
        """Build from any iterable; sorts, deduplicates and adds the endpoints."""
        pts = {rat(p) for p in points} | {ZERO, ONE}
        return cls(tuple(sorted(pts)))

    def __iter__(self) -> Iterator[Rat]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def mesh(self) -> Rat:
        return max(b - a for a, b in zip(self.points, self.points[1:]))

    def intervals(self) -> list[tuple[Rat, Rat]]:
        return list(zip(self.points, self.points[1:]))


def refine(p: Partition, q: Partition) -> Partition:
    return Partition(tuple(sorted(set(p.points) | set(q.points))))


def uniform_grid(n: int) -> Partition:
    if n < 1:
        raise ValueError("uniform_grid needs n >= 1")
    return Partition(tuple(Rat(k, n) for k in range(n + 1)))


def farey(order: int) -> list[Rat]:
    """All rationals in [0,1] with denominator at most ``order``, ascending."""
    if order < 1:
        raise ValueError("Farey order must be >= 1")
    out = [ZERO]
    a, b, c, d = 0, 1, 1, order
    while c <= order:
        out.append(Rat(c, d))
        k = (order + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return out


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
