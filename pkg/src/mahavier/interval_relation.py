"""Closed relations on [0, 1] with exact rational coordinates.

A relation is a finite union of four kinds of parts:

* monotone piecewise-linear branches (:class:`~mahavier.plmaps.PLBranch`),
* vertical segments ``{x} × [y0, y1]``,
* horizontal segments ``[x0, x1] × {y}``,
* isolated points.

Every part is closed, so the union is a closed relation.  Images of finite
unions of intervals are finite unions of intervals and are computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Callable, Iterable, Optional, Sequence

from .errors import MalformedInputError, PreconditionError, UnsupportedInputError
from .finite import FiniteRelation
from .intervals import IntervalUnion, as_rational, format_rational
from .plmaps import ONE, ZERO, PLBranch

Vertical = tuple[Fraction, Fraction, Fraction]
Horizontal = tuple[Fraction, Fraction, Fraction]
Point = tuple[Fraction, Fraction]


def _unit(*values) -> None:
    for v in values:
        if not ZERO <= v <= ONE:
            raise MalformedInputError(f"coordinate {v} outside [0, 1]")


def _segment(a, b, c) -> tuple[Fraction, Fraction, Fraction]:
    a, b, c = as_rational(a), as_rational(b), as_rational(c)
    _unit(a, b, c)
    return a, b, c


@dataclass(frozen=True)
class IntervalRelation:
    """A closed relation on [0, 1].

    ``branches`` keep their given order, because witness specifications
    refer to branches by index.  The other parts are sorted and deduplicated.
    Verticals are ``(x, y0, y1)`` and horizontals ``(x0, x1, y)``.
    """

    branches: tuple[PLBranch, ...] = ()
    verticals: tuple[Vertical, ...] = ()
    horizontals: tuple[Horizontal, ...] = ()
    isolated: tuple[Point, ...] = ()

    def __post_init__(self):
        branches = tuple(self.branches)
        if not all(isinstance(b, PLBranch) for b in branches):
            raise MalformedInputError("branches must be PLBranch instances")
        verticals = tuple(sorted({_segment(*v) for v in self.verticals}))
        horizontals = tuple(sorted({_segment(*h) for h in self.horizontals}))
        isolated = set()
        for x, y in self.isolated:
            x, y = as_rational(x), as_rational(y)
            _unit(x, y)
            isolated.add((x, y))
        for x, y0, y1 in verticals:
            if y0 > y1:
                raise MalformedInputError("vertical segment with y0 > y1")
        for x0, x1, y in horizontals:
            if x0 > x1:
                raise MalformedInputError("horizontal segment with x0 > x1")
        object.__setattr__(self, "branches", branches)
        object.__setattr__(self, "verticals", verticals)
        object.__setattr__(self, "horizontals", horizontals)
        object.__setattr__(self, "isolated", tuple(sorted(isolated)))

    @classmethod
    def from_branches(cls, *branches: PLBranch) -> "IntervalRelation":
        return cls(branches=tuple(branches))

    @classmethod
    def identity(cls) -> "IntervalRelation":
        return cls(branches=(PLBranch((ZERO, ONE), (ZERO, ONE)),))

    def image(self, U: IntervalUnion) -> IntervalUnion:
        """Exact image ``{y : (x, y) ∈ R for some x ∈ U}``."""
        pieces = []
        for b in self.branches:
            pieces.extend(b.image(U).parts)
        for x, y0, y1 in self.verticals:
            if x in U:
                pieces.append((y0, y1))
        for x0, x1, y in self.horizontals:
            if U & IntervalUnion.of((x0, x1)):
                pieces.append((y, y))
        for x, y in self.isolated:
            if x in U:
                pieces.append((y, y))
        return IntervalUnion.from_iterable(pieces)

    def inverse(self) -> "IntervalRelation":
        return IntervalRelation(
            branches=tuple(b.inverse() for b in self.branches),
            verticals=tuple((y, x0, x1) for x0, x1, y in self.horizontals),
            horizontals=tuple((y0, y1, x) for x, y0, y1 in self.verticals),
            isolated=tuple((y, x) for x, y in self.isolated),
        )

    def contains(self, x, y) -> bool:
        x, y = as_rational(x), as_rational(y)
        if any(b.domain[0] <= x <= b.domain[1] and b(x) == y for b in self.branches):
            return True
        if any(vx == x and y0 <= y <= y1 for vx, y0, y1 in self.verticals):
            return True
        if any(hy == y and x0 <= x <= x1 for x0, x1, hy in self.horizontals):
            return True
        return (x, y) in self.isolated

    def domain(self) -> IntervalUnion:
        return self.inverse().image(IntervalUnion.unit())

    def range(self) -> IntervalUnion:
        return self.image(IntervalUnion.unit())

    def coordinates(self) -> list[Fraction]:
        """Every rational that appears in the description, sorted."""
        found = set()
        for b in self.branches:
            found.update(b.xs)
            found.update(b.ys)
        for seg in self.verticals + self.horizontals:
            found.update(seg)
        for pt in self.isolated:
            found.update(pt)
        return sorted(found)

    def to_json(self) -> dict:
        r = format_rational
        return {
            "branches": [b.to_json() for b in self.branches],
            "verticals": [{"x": r(x), "y0": r(y0), "y1": r(y1)} for x, y0, y1 in self.verticals],
            "horizontals": [{"x0": r(x0), "x1": r(x1), "y": r(y)} for x0, x1, y in self.horizontals],
            "isolated": [[r(x), r(y)] for x, y in self.isolated],
        }

    @classmethod
    def from_json(cls, data) -> "IntervalRelation":
        return cls(
            branches=tuple(PLBranch.from_json(b) for b in data.get("branches", [])),
            verticals=tuple((v["x"], v["y0"], v["y1"]) for v in data.get("verticals", [])),
            horizontals=tuple((h["x0"], h["x1"], h["y"]) for h in data.get("horizontals", [])),
            isolated=tuple((x, y) for x, y in data.get("isolated", [])),
        )


def image(R: IntervalRelation, U: IntervalUnion) -> IntervalUnion:
    return R.image(U)


def inverse(R: IntervalRelation) -> IntervalRelation:
    return R.inverse()


def iterate_image(R: IntervalRelation, U: IntervalUnion, n: int) -> IntervalUnion:
    if n < 0:
        raise ValueError("iterate count must be nonnegative")
    for _ in range(n):
        U = R.image(U)
    return U


def discretize(R: IntervalRelation, extra: Iterable = ()) -> FiniteRelation:
    """The finite relation ``R ∩ (P × P)`` over the coordinates ``P`` of ``R``.

    Point ids are ``"p/q"`` strings and coordinates are 1-d floats.
    """
    P = sorted(set(R.coordinates()) | {as_rational(x) for x in extra})
    ids = {x: format_rational(x) for x in P}
    edges = frozenset((ids[x], ids[y]) for x, y in product(P, P) if R.contains(x, y))
    return FiniteRelation(tuple((ids[x], (float(x),)) for x in P), edges)


# -- conditions that rule out CR-turbulence --------------------------------


@dataclass(frozen=True)
class _FiberPiece:
    """A single-valued part of the inverse relation: ``y -> x`` on ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction
    fn: Callable[[Fraction], Fraction]
    breaks: tuple[Fraction, ...] = field(default=())


def _fiber_pieces(R: IntervalRelation) -> list[_FiberPiece]:
    pieces = []
    for b in R.branches:
        inv = b.inverse()
        pieces.append(_FiberPiece(*inv.domain, inv, inv.xs))
    for x, y0, y1 in R.verticals:
        pieces.append(_FiberPiece(y0, y1, lambda _y, c=x: c))
    for x0, x1, y in R.horizontals:
        if x0 == x1:
            pieces.append(_FiberPiece(y, y, lambda _y, c=x0: c))
    for x, y in R.isolated:
        pieces.append(_FiberPiece(y, y, lambda _y, c=x: c))
    return pieces


def _linear_roots(u0, u1, h0, h1) -> list[Fraction]:
    if h0 == 0 or h1 == 0 or (h0 > 0) == (h1 > 0):
        return []
    return [u0 + (u1 - u0) * h0 / (h0 - h1)]


def _two_preimages_somewhere(p: _FiberPiece, q: _FiberPiece, avoid: set) -> bool:
    # bad u: u, p(u), q(u) all avoid {a, b} and p(u) != q(u)
    lo, hi = max(p.lo, q.lo), min(p.hi, q.hi)
    if lo > hi:
        return False

    def bad(u):
        x, y = p.fn(u), q.fn(u)
        return u not in avoid and x != y and x not in avoid and y not in avoid

    grid = sorted({lo, hi, *(t for t in p.breaks + q.breaks if lo < t < hi), *(t for t in avoid if lo < t < hi)})
    refined = set(grid)
    for u0, u1 in zip(grid, grid[1:]):
        p0, p1, q0, q1 = p.fn(u0), p.fn(u1), q.fn(u0), q.fn(u1)
        refined.update(_linear_roots(u0, u1, p0 - q0, p1 - q1))
        for c in avoid:
            refined.update(_linear_roots(u0, u1, p0 - c, p1 - c))
            refined.update(_linear_roots(u0, u1, q0 - c, q1 - c))
    refined = sorted(refined)
    probes = refined + [(s + t) / 2 for s, t in zip(refined, refined[1:])]
    return any(bad(u) for u in probes)


def non_turbulence_conditions_interval(R: IntervalRelation, a, b) -> bool:
    """Sufficient conditions, evaluated exactly, for ``R`` not to be CR-turbulent.

    (1) only ``a`` maps to ``a``; (2) ``b`` maps only to ``b``; (3) no point
    outside ``{a, b}`` has two distinct preimages outside ``{a, b}``.
    Condition (3) is decided by sweeping every pair of single-valued fiber
    pieces of the inverse relation over the cells where their relative
    order and their membership in ``{a, b}`` is constant.
    """
    a, b = as_rational(a), as_rational(b)
    if a == b:
        raise PreconditionError("a-equals-b")
    _unit(a, b)
    if not R.inverse().image(IntervalUnion.point(a)) <= IntervalUnion.point(a):
        return False
    if not R.image(IntervalUnion.point(b)) <= IntervalUnion.point(b):
        return False
    avoid = {a, b}
    for x0, x1, y in R.horizontals:
        if x0 < x1 and y not in avoid:
            return False
    pieces = _fiber_pieces(R)
    for i, p in enumerate(pieces):
        for q in pieces[i + 1:]:
            if _two_preimages_somewhere(p, q, avoid):
                return False
    return True


# -- Cantor-set approximation ---------------------------------------------


def cantor_points(depth: int) -> list[Fraction]:
    """Left endpoints of the ``2**depth`` middle-thirds intervals at ``depth``."""
    if depth < 1:
        raise ValueError("depth must be positive")
    pts = [ZERO]
    for level in range(1, depth + 1):
        step = Fraction(2, 3 ** level)
        pts = pts + [p + step for p in pts]
    return sorted(pts)


def _permutation(spec, size: int) -> list[int]:
    if spec is None or spec == "identity":
        return list(range(size))
    if spec == "shift":
        return [(i + 1) % size for i in range(size)]
    if spec == "reverse":
        return [size - 1 - i for i in range(size)]
    perm = list(spec)
    if sorted(perm) != list(range(size)):
        raise MalformedInputError(f"permutation is not a bijection of {size} points")
    return perm


def cantor_relation(depth: int, a, b, permutation=None) -> IntervalRelation:
    """Isolated graph of a bijection of Cantor approximation points plus ``V_a`` and ``H_b``.

    ``permutation`` is ``None``/``"identity"``, ``"shift"`` (cyclic
    successor), ``"reverse"``, or an explicit list with ``i -> perm[i]`` on
    the sorted points.
    """
    a, b = as_rational(a), as_rational(b)
    if a == b:
        raise PreconditionError("a-equals-b")
    _unit(a, b)
    pts = cantor_points(depth)
    width = Fraction(1, 3 ** depth)
    endpoints = set(pts) | {p + width for p in pts}
    for name, v in (("a", a), ("b", b)):
        if v in endpoints:
            raise PreconditionError(f"{name}-on-cantor-point", f"{v} is a depth-{depth} interval endpoint")
    perm = _permutation(permutation, len(pts))
    graph = [(pts[i], pts[perm[i]]) for i in range(len(pts))]
    # the graph may meet V_a and H_b only on the diagonal
    for x, y in graph:
        if (x == a or y == b) and x != y:
            raise PreconditionError("graph-meets-cross-off-diagonal")
    return IntervalRelation(
        verticals=((a, ZERO, ONE),),
        horizontals=((ZERO, ONE, b),),
        isolated=tuple(graph),
    )


# -- periodic itineraries of linear branches -------------------------------


def _slope(branch: PLBranch) -> Fraction:
    if branch.xs[0] != 0 or branch.ys[0] != 0:
        raise UnsupportedInputError("branch does not pass through the origin")
    slopes = {(y1 - y0) / (x1 - x0) for (x0, x1), (y0, y1) in zip(zip(branch.xs, branch.xs[1:]), zip(branch.ys, branch.ys[1:]))}
    if len(slopes) != 1:
        raise UnsupportedInputError("branch is not linear")
    return slopes.pop()


def _distinct_orderings(counts: list[int]):
    """Words with the given letter multiplicities, in lexicographic order."""
    total = sum(counts)
    word = []

    def rec():
        if len(word) == total:
            yield tuple(word)
            return
        for i, c in enumerate(counts):
            if c:
                counts[i] -= 1
                word.append(i)
                yield from rec()
                word.pop()
                counts[i] += 1

    yield from rec()


def periodic_itineraries(R: IntervalRelation, k_max: int) -> list[tuple[tuple[int, ...], IntervalUnion]]:
    """Words of branch indices, length at most ``k_max``, carrying nonzero periodic points.

    Every branch is ``x -> s x`` on ``[0, d]``.  Along a word the composite
    is ``x -> (∏ s) x`` on ``[0, D]``, so a nonzero fixed point exists iff
    the slope product is 1 and ``D > 0``; the fixed set is then ``[0, D]``.
    The product depends only on the multiset of letters, so orderings are
    generated only for multisets with product 1.  Words are reported in
    length-then-lexicographic order.
    """
    if k_max < 1:
        raise ValueError("k_max must be positive")
    if R.verticals or R.horizontals or R.isolated:
        raise UnsupportedInputError("only relations made of linear branches are supported")
    slopes = [_slope(b) for b in R.branches]
    ends = [b.domain[1] for b in R.branches]
    found = []
    for k in range(1, k_max + 1):
        for multiset in combinations_with_replacement(range(len(slopes)), k):
            prod = Fraction(1)
            for i in multiset:
                prod *= slopes[i]
            if prod != 1:
                continue
            counts = [multiset.count(i) for i in range(len(slopes))]
            for word in _distinct_orderings(counts):
                scale, reach = Fraction(1), ONE
                for i in word:
                    reach = min(reach, ends[i] / scale)
                    scale *= slopes[i]
                if reach > 0:
                    found.append((word, IntervalUnion.of((ZERO, reach))))
    return found


def sample_branch_points(R: IntervalRelation, xs: Sequence[Fraction]) -> list[Point]:
    """All ``(x, y)`` with ``y`` on some branch over ``x``."""
    out = []
    for x in xs:
        for b in R.branches:
            lo, hi = b.domain
            if lo <= x <= hi:
                out.append((x, b(x)))
    return out


def relation_from_parts(
    branches: Sequence[PLBranch] = (),
    verticals: Sequence = (),
    horizontals: Sequence = (),
    isolated: Sequence = (),
) -> IntervalRelation:
    return IntervalRelation(tuple(branches), tuple(verticals), tuple(horizontals), tuple(isolated))


def branch_index(R: IntervalRelation, branch: PLBranch) -> Optional[int]:
    try:
        return R.branches.index(branch)
    except ValueError:
        return None
