"""Exact nonnegative rationals extended by a top element.

Values live in [0, inf] and are stored as a reduced pair (numerator,
denominator); the top element is the pair (1, 0).  Cross-multiplication then
orders and adds every value uniformly, including inf.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Union

__all__ = ["ExtReal", "ZERO", "ONE", "INF", "ex", "ex_add", "ex_join", "ex_meet"]


class ExtReal:
    __slots__ = ("_n", "_d")

    def __init__(self, value: Union["ExtReal", int, Fraction, str, float] = 0):
        if isinstance(value, ExtReal):
            n, d = value._n, value._d
        elif isinstance(value, str):
            n, d = _parse(value)
        elif isinstance(value, float):
            if value != float("inf"):
                raise TypeError("only float('inf') is accepted; use Fraction or str for finite values")
            n, d = 1, 0
        elif isinstance(value, (int, Fraction)):
            if value < 0:
                raise ValueError(f"negative value {value}")
            f = Fraction(value)
            n, d = f.numerator, f.denominator
        else:
            raise TypeError(f"cannot build ExtReal from {type(value).__name__}")
        self._n = n
        self._d = d

    @classmethod
    def _raw(cls, n: int, d: int) -> "ExtReal":
        obj = object.__new__(cls)
        obj._n = n
        obj._d = d
        return obj

    @property
    def is_inf(self) -> bool:
        return self._d == 0

    def as_fraction(self) -> Fraction:
        if self._d == 0:
            raise OverflowError("inf has no rational value")
        return Fraction(self._n, self._d)

    def __add__(self, other):
        if not isinstance(other, ExtReal):
            try:
                other = ExtReal(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self._d == 0 or other._d == 0:
            return INF
        n = self._n * other._d + other._n * self._d
        d = self._d * other._d
        g = gcd(n, d)
        return ExtReal._raw(n // g, d // g)

    __radd__ = __add__

    # ordering: a/b < c/d  <=>  a*d < c*b, valid for the (1, 0) top as well
    def __lt__(self, other: "ExtReal") -> bool:
        return self._n * other._d < other._n * self._d

    def __le__(self, other: "ExtReal") -> bool:
        return self._n * other._d <= other._n * self._d

    def __gt__(self, other: "ExtReal") -> bool:
        return self._n * other._d > other._n * self._d

    def __ge__(self, other: "ExtReal") -> bool:
        return self._n * other._d >= other._n * self._d

    def __eq__(self, other) -> bool:
        if isinstance(other, ExtReal):
            return self._n == other._n and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._d != 0 and Fraction(self._n, self._d) == other
        if isinstance(other, float):
            return self._d == 0 and other == float("inf")
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._n, self._d))

    def __str__(self) -> str:
        if self._d == 0:
            return "inf"
        if self._d == 1:
            return str(self._n)
        return f"{self._n}/{self._d}"

    def __repr__(self) -> str:
        return f"ExtReal('{self}')"

    def __reduce__(self):
        return (ExtReal, (str(self),))


def _parse(token: str) -> tuple[int, int]:
    s = token.strip()
    if s in ("inf", "∞", "+inf", "oo"):
        return 1, 0
    try:
        if "/" in s:
            p, q = s.split("/", 1)
            p, q = int(p), int(q)
            if q == 0:
                raise ValueError(f"zero denominator in {token!r}")
            f = Fraction(p, q)
        else:
            f = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed extended rational {token!r}: {exc}") from None
    if f < 0:
        raise ValueError(f"negative value {token!r}")
    return f.numerator, f.denominator


ZERO = ExtReal._raw(0, 1)
ONE = ExtReal._raw(1, 1)
INF = ExtReal._raw(1, 0)


def ex(value) -> ExtReal:
    """Coerce ints, Fractions, tokens and ExtReals to ExtReal."""
    if isinstance(value, ExtReal):
        return value
    return ExtReal(value)


def ex_add(a: ExtReal, b: ExtReal) -> ExtReal:
    return a + b


def ex_join(values: Iterable[ExtReal]) -> ExtReal:
    """Supremum; the empty join is 0."""
    return max(values, default=ZERO)


def ex_meet(values: Iterable[ExtReal]) -> ExtReal:
    """Infimum; the empty meet is inf."""
    return min(values, default=INF)
