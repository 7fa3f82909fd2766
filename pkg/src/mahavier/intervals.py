"""Exact rationals and finite unions of closed intervals.

Rationals are :class:`fractions.Fraction`; on the wire they are ``"p/q"``
strings, always with an explicit denominator so that serialization is
canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator

from .errors import MalformedInputError

Interval = tuple[Fraction, Fraction]


def as_rational(value) -> Fraction:
    """Coerce ``value`` to a Fraction without ever going through a float.

    Accepts Fractions, ints and strings such as ``"3/4"`` or ``"2"``.
    """
    if isinstance(value, bool):
        raise MalformedInputError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            if sep:
                return Fraction(int(num), int(den))
            return Fraction(int(num))
        except (ValueError, ZeroDivisionError):
            raise MalformedInputError(f"not a rational string: {value!r}") from None
    raise MalformedInputError(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _normalize(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    items = sorted((as_rational(lo), as_rational(hi)) for lo, hi in intervals)
    merged: list[list[Fraction]] = []
    for lo, hi in items:
        if lo > hi:
            raise MalformedInputError(f"empty interval [{lo}, {hi}]")
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


@dataclass(frozen=True)
class IntervalUnion:
    """A finite union of closed intervals, stored sorted and merged.

    Degenerate intervals ``[x, x]`` are allowed.  Two intervals that touch
    at an endpoint are merged, so the stored parts are the connected
    components of the set.

    Build instances with :meth:`of`, which normalizes; the raw constructor
    insists on already-normalized parts.
    """

    parts: tuple[Interval, ...] = ()

    def __post_init__(self):
        if _normalize(self.parts) != tuple(self.parts):
            raise MalformedInputError("IntervalUnion parts must be sorted, disjoint and merged")

    @classmethod
    def of(cls, *intervals: Interval) -> "IntervalUnion":
        return cls(_normalize(intervals))

    @classmethod
    def from_iterable(cls, intervals: Iterable[Interval]) -> "IntervalUnion":
        return cls(_normalize(intervals))

    @classmethod
    def point(cls, x) -> "IntervalUnion":
        x = as_rational(x)
        return cls(((x, x),))

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls(())

    @classmethod
    def unit(cls) -> "IntervalUnion":
        return cls(((Fraction(0), Fraction(1)),))

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __repr__(self) -> str:
        if not self.parts:
            return "IntervalUnion()"
        body = " ∪ ".join(f"[{lo}, {hi}]" for lo, hi in self.parts)
        return f"IntervalUnion({body})"

    @property
    def is_empty(self) -> bool:
        return not self.parts

    @property
    def lower(self) -> Fraction:
        return self.parts[0][0]

    @property
    def upper(self) -> Fraction:
        return self.parts[-1][1]

    def at_most_one_point(self) -> bool:
        return not self.parts or (len(self.parts) == 1 and self.parts[0][0] == self.parts[0][1])

    def __contains__(self, x) -> bool:
        x = as_rational(x)
        return any(lo <= x <= hi for lo, hi in self.parts)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion.from_iterable(self.parts + other.parts)

    __or__ = union

    def intersection(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        i = j = 0
        a, b = self.parts, other.parts
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalUnion.from_iterable(out)

    __and__ = intersection

    def issubset(self, other: "IntervalUnion") -> bool:
        return all(any(lo <= x and y <= hi for lo, hi in other.parts) for x, y in self.parts)

    __le__ = issubset

    def issuperset(self, other: "IntervalUnion") -> bool:
        return other.issubset(self)

    __ge__ = issuperset

    def uncovered_by(self, cover: "IntervalUnion") -> "IntervalUnion":
        """Closure of ``self`` minus ``cover``; used for failure diagnostics."""
        out = []
        for lo, hi in self.parts:
            if lo == hi:
                if lo not in cover:
                    out.append((lo, hi))
                continue
            cursor = lo
            for clo, chi in cover.parts:
                if chi < lo:
                    continue
                if clo > hi:
                    break
                if clo > cursor:
                    out.append((cursor, clo))
                cursor = max(cursor, chi)
                if cursor >= hi:
                    break
            if cursor < hi:
                out.append((cursor, hi))
        return IntervalUnion.from_iterable(out)

    def to_json(self) -> list[list[str]]:
        return [[format_rational(lo), format_rational(hi)] for lo, hi in self.parts]

    @classmethod
    def from_json(cls, data) -> "IntervalUnion":
        try:
            return cls.from_iterable((as_rational(lo), as_rational(hi)) for lo, hi in data)
        except (TypeError, ValueError) as exc:
            raise MalformedInputError(f"bad interval list: {exc}") from None
