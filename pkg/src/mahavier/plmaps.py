"""Strictly monotone piecewise-linear maps with rational breakpoints."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import MalformedInputError
from .intervals import IntervalUnion, as_rational, format_rational

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class PLBranch:
    """Graph of a strictly monotone continuous PL map between subsets of [0, 1].

    ``xs`` are the breakpoints (strictly increasing) and ``ys`` the values at
    them; the map is linear in between.  At least two breakpoints are
    required, so a branch always has a nondegenerate domain.
    """

    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]

    def __post_init__(self):
        xs = tuple(as_rational(x) for x in self.xs)
        ys = tuple(as_rational(y) for y in self.ys)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        if len(xs) != len(ys):
            raise MalformedInputError("branch xs and ys differ in length")
        if len(xs) < 2:
            raise MalformedInputError("a branch needs at least two breakpoints")
        if any(not ZERO <= v <= ONE for v in xs + ys):
            raise MalformedInputError("branch coordinates must lie in [0, 1]")
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise MalformedInputError("branch breakpoints must be strictly increasing")
        steps = [b - a for a, b in zip(ys, ys[1:])]
        if not (all(s > 0 for s in steps) or all(s < 0 for s in steps)):
            raise MalformedInputError("branch values must be strictly monotone")

    @classmethod
    def linear(cls, slope, x_max) -> "PLBranch":
        """The map ``x -> slope * x`` on ``[0, x_max]``."""
        slope, x_max = as_rational(slope), as_rational(x_max)
        return cls((ZERO, x_max), (ZERO, slope * x_max))

    @property
    def increasing(self) -> bool:
        return self.ys[1] > self.ys[0]

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.xs[0], self.xs[-1]

    @property
    def range(self) -> tuple[Fraction, Fraction]:
        return (self.ys[0], self.ys[-1]) if self.increasing else (self.ys[-1], self.ys[0])

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise ValueError(f"{x} outside branch domain [{lo}, {hi}]")
        k = min(bisect_right(self.xs, x), len(self.xs) - 1)
        x0, x1 = self.xs[k - 1], self.xs[k]
        y0, y1 = self.ys[k - 1], self.ys[k]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def inverse(self) -> "PLBranch":
        if self.increasing:
            return PLBranch(self.ys, self.xs)
        return PLBranch(self.ys[::-1], self.xs[::-1])

    def image_interval(self, lo, hi):
        """Image of ``[lo, hi]`` as a pair, or None when it misses the domain."""
        dlo, dhi = self.domain
        lo, hi = max(lo, dlo), min(hi, dhi)
        if lo > hi:
            return None
        a, b = self(lo), self(hi)
        return (a, b) if a <= b else (b, a)

    def image(self, U: IntervalUnion) -> IntervalUnion:
        return IntervalUnion.from_iterable(
            iv for iv in (self.image_interval(lo, hi) for lo, hi in U) if iv is not None
        )

    def preimage(self, U: IntervalUnion) -> IntervalUnion:
        return self.inverse().image(U)

    def breakpoints_in(self, lo, hi) -> list[Fraction]:
        return [x for x in self.xs if lo < x < hi]

    def to_json(self) -> dict:
        return {"xs": [format_rational(x) for x in self.xs], "ys": [format_rational(y) for y in self.ys]}

    @classmethod
    def from_json(cls, data) -> "PLBranch":
        return cls(tuple(as_rational(x) for x in data["xs"]), tuple(as_rational(y) for y in data["ys"]))


def coincidence_set(p: PLBranch, q: PLBranch, U: IntervalUnion) -> IntervalUnion:
    """Exact set of ``x`` in ``U`` where both branches are defined and agree."""
    common = IntervalUnion.of(p.domain) & IntervalUnion.of(q.domain) & U
    found = []
    for lo, hi in common:
        if lo == hi:
            if p(lo) == q(lo):
                found.append((lo, lo))
            continue
        grid = sorted({lo, hi, *p.breakpoints_in(lo, hi), *q.breakpoints_in(lo, hi)})
        diffs = [p(x) - q(x) for x in grid]
        for (x0, d0), (x1, d1) in zip(zip(grid, diffs), zip(grid[1:], diffs[1:])):
            if d0 == 0 and d1 == 0:
                found.append((x0, x1))
            elif d0 == 0:
                found.append((x0, x0))
            elif d1 == 0:
                found.append((x1, x1))
            elif (d0 > 0) != (d1 > 0):
                root = x0 + (x1 - x0) * d0 / (d0 - d1)
                found.append((root, root))
    return IntervalUnion.from_iterable(found)


def pl_function_equal(a: Sequence[PLBranch], b: Sequence[PLBranch]) -> bool:
    """Whether two piece lists describe the same function on the same domain.

    Both piece lists must already be functions (see :func:`check_function_pieces`).
    Linear interpolation between the merged breakpoints makes agreement at
    those points sufficient.
    """
    def dom(pieces):
        return IntervalUnion.from_iterable(p.domain for p in pieces)

    if dom(a) != dom(b):
        return False
    grid = sorted({x for p in list(a) + list(b) for x in p.xs})
    return all(evaluate_pieces(a, x) == evaluate_pieces(b, x) for x in grid)


def evaluate_pieces(pieces: Iterable[PLBranch], x) -> Fraction:
    x = as_rational(x)
    for p in pieces:
        lo, hi = p.domain
        if lo <= x <= hi:
            return p(x)
    raise ValueError(f"{x} outside the domain of every piece")


def check_function_pieces(pieces: Sequence[PLBranch]) -> tuple[PLBranch, ...]:
    """Validate that ``pieces`` tile [0, 1] and agree at shared breakpoints."""
    pieces = tuple(sorted(pieces, key=lambda p: p.domain))
    if not pieces:
        raise MalformedInputError("a map needs at least one piece")
    if pieces[0].domain[0] != ZERO or pieces[-1].domain[1] != ONE:
        raise MalformedInputError("map pieces must cover [0, 1]")
    for left, right in zip(pieces, pieces[1:]):
        if left.domain[1] != right.domain[0]:
            raise MalformedInputError("map pieces must be contiguous without overlap")
        if left.ys[-1] != right.ys[0]:
            raise MalformedInputError("map pieces disagree at a shared breakpoint")
    return pieces


def compose_pieces(outer: Sequence[PLBranch], inner: Sequence[PLBranch]) -> tuple[PLBranch, ...]:
    """Pieces of ``outer ∘ inner``, one per linear segment of the composite."""
    out = []
    for piece in inner:
        lo, hi = piece.domain
        cuts = {lo, hi, *piece.breakpoints_in(lo, hi)}
        inv = piece.inverse()
        ilo, ihi = piece.range
        for o in outer:
            for y in o.xs:
                if ilo < y < ihi:
                    cuts.add(inv(y))
        grid = sorted(cuts)
        for x0, x1 in zip(grid, grid[1:]):
            y0, y1 = evaluate_pieces(outer, piece(x0)), evaluate_pieces(outer, piece(x1))
            if y0 == y1:
                raise MalformedInputError("composite map is constant on a segment")
            out.append(PLBranch((x0, x1), (y0, y1)))
    return tuple(out)
