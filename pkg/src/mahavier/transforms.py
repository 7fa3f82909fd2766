"""Classical turbulence of maps and witness transformations.

Two carriers are supported: finite functional relations, whose sets are
frozensets of point ids, and systems of indexed unit intervals (legs) where
every leg is mapped onto some leg by a continuous PL function, whose sets
are :class:`LegSet` values.  Legs are never glued together.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .branch_pair import REVERSE_CR, IntervalWitness, SetSpec, check_interval_witness, first_projection
from .errors import MalformedInputError, PreconditionError, TheoremInapplicableError, UnsupportedInputError
from .finite import FiniteRelation, LevelWitness, verify_cr_witness
from .intervals import IntervalUnion, as_rational
from .interval_relation import IntervalRelation
from .plmaps import ONE, ZERO, PLBranch, check_function_pieces, coincidence_set, compose_pieces, evaluate_pieces, pl_function_equal


class Turbulence(str, enum.Enum):
    SEPARATED = "separated-turbulent"
    TURBULENT = "turbulent"
    NEITHER = "neither"


@dataclass(frozen=True)
class LegSet:
    """A closed subset of a leg carrier: one interval union per leg."""

    parts: tuple[tuple[int, IntervalUnion], ...] = ()

    def __post_init__(self):
        merged: dict[int, IntervalUnion] = {}
        for leg, U in self.parts:
            if not isinstance(leg, int) or leg < 0:
                raise MalformedInputError(f"bad leg index {leg!r}")
            merged[leg] = merged.get(leg, IntervalUnion.empty()) | U
        object.__setattr__(self, "parts", tuple(sorted((k, U) for k, U in merged.items() if U)))

    @classmethod
    def of(cls, mapping: Mapping[int, Iterable] | None = None) -> "LegSet":
        mapping = mapping or {}
        return cls(tuple((leg, ivs if isinstance(ivs, IntervalUnion) else IntervalUnion.from_iterable(ivs)) for leg, ivs in mapping.items()))

    @classmethod
    def on_leg(cls, leg: int, *intervals) -> "LegSet":
        return cls(((leg, IntervalUnion.of(*intervals)),))

    def get(self, leg: int) -> IntervalUnion:
        return dict(self.parts).get(leg, IntervalUnion.empty())

    def legs(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.parts)

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __or__(self, other: "LegSet") -> "LegSet":
        return LegSet(self.parts + other.parts)

    def __and__(self, other: "LegSet") -> "LegSet":
        return LegSet(tuple((k, U & other.get(k)) for k, U in self.parts))

    def __le__(self, other: "LegSet") -> bool:
        return all(U <= other.get(k) for k, U in self.parts)

    def at_most_one_point(self) -> bool:
        return not self.parts or (len(self.parts) == 1 and self.parts[0][1].at_most_one_point())

    def to_json(self) -> list:
        return [{"leg": k, "intervals": U.to_json()} for k, U in self.parts]


SetLike = Union[frozenset, LegSet]


@dataclass(frozen=True)
class FiniteSystem:
    """A map on a finite set, given as a functional relation."""

    relation: FiniteRelation

    def __post_init__(self):
        if not self.relation.is_functional():
            raise MalformedInputError("relation is not single-valued with full domain")

    @classmethod
    def from_map(cls, mapping: Mapping) -> "FiniteSystem":
        return cls(FiniteRelation.from_edges(mapping.items(), points=mapping.keys()))

    def __call__(self, x):
        return self.relation.successors[x][0]

    def image(self, S: frozenset) -> frozenset:
        return frozenset(self(x) for x in S)

    def preimage(self, S: frozenset) -> frozenset:
        return frozenset(x for x in self.relation.ids if self(x) in S)

    def graph(self) -> FiniteRelation:
        return self.relation

    def check_set(self, S) -> frozenset:
        S = frozenset(S)
        unknown = S - set(self.relation.ids)
        if unknown:
            raise MalformedInputError(f"undeclared points {sorted(unknown)!r}")
        return S


@dataclass(frozen=True)
class LegMap:
    target: int
    pieces: tuple[PLBranch, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", check_function_pieces(tuple(self.pieces)))


@dataclass(frozen=True)
class LegSystem:
    """Continuous PL maps between indexed copies of [0, 1]."""

    legs: tuple[LegMap, ...]

    def __post_init__(self):
        if not self.legs:
            raise MalformedInputError("a leg system needs at least one leg")
        for m in self.legs:
            if not 0 <= m.target < len(self.legs):
                raise MalformedInputError(f"leg target {m.target} out of range")

    @classmethod
    def single(cls, pieces: Sequence[PLBranch]) -> "LegSystem":
        return cls((LegMap(0, tuple(pieces)),))

    def __call__(self, point):
        leg, x = point
        m = self.legs[leg]
        return m.target, evaluate_pieces(m.pieces, x)

    def image(self, S: LegSet) -> LegSet:
        out = []
        for leg, U in S.parts:
            m = self.legs[leg]
            out.append((m.target, IntervalUnion.from_iterable(iv for p in m.pieces for iv in p.image(U))))
        return LegSet(tuple(out))

    def preimage(self, S: LegSet) -> LegSet:
        out = []
        for leg, m in enumerate(self.legs):
            U = S.get(m.target)
            if U:
                out.append((leg, IntervalUnion.from_iterable(iv for p in m.pieces for iv in p.preimage(U))))
        return LegSet(tuple(out))

    def iterate_pieces(self, leg: int, m: int) -> tuple[int, tuple[PLBranch, ...]]:
        """Target leg and pieces of ``f^m`` restricted to ``leg``."""
        pieces = (PLBranch((ZERO, ONE), (ZERO, ONE)),)
        for _ in range(m):
            step = self.legs[leg]
            pieces = compose_pieces(step.pieces, pieces)
            leg = step.target
        return leg, pieces

    def graph(self) -> IntervalRelation:
        if len(self.legs) != 1:
            raise UnsupportedInputError("graphs are only formed for single-leg systems")
        return IntervalRelation(branches=self.legs[0].pieces)

    def check_set(self, S) -> LegSet:
        if not isinstance(S, LegSet):
            raise MalformedInputError("leg systems take LegSet arguments")
        if any(k >= len(self.legs) for k in S.legs()):
            raise MalformedInputError("set refers to a missing leg")
        return S


System = Union[FiniteSystem, LegSystem]


def tent_pieces() -> tuple[PLBranch, PLBranch]:
    half = Fraction(1, 2)
    return PLBranch((ZERO, half), (ZERO, ONE)), PLBranch((half, ONE), (ONE, ZERO))


def tent_system() -> LegSystem:
    return LegSystem.single(tent_pieces())


def nleg_system(n: int) -> LegSystem:
    """Leg 0 maps by the tent map to leg 1; leg ``k ≠ 0`` maps identically to leg ``k+1 mod n``."""
    if n < 1:
        raise ValueError("need at least one leg")
    identity = (PLBranch((ZERO, ONE), (ZERO, ONE)),)
    legs = [LegMap(1 % n, tent_pieces())]
    legs += [LegMap((k + 1) % n, identity) for k in range(1, n)]
    S = LegSystem(tuple(legs))
    leg, pieces = S.iterate_pieces(0, n)
    if leg != 0 or not pl_function_equal(pieces, tent_pieces()):
        raise AssertionError("f^n on leg 0 is not the tent map")
    return S


def iterate(S: System, X: SetLike, m: int) -> SetLike:
    for _ in range(m):
        X = S.image(X)
    return X


def _nonempty(*sets):
    if not all(sets):
        raise MalformedInputError("sets must be nonempty")


def verify_turbulent(S: System, K, L, m: int = 1) -> Turbulence:
    """Classify the pair ``(K, L)`` for the iterate ``f^m``."""
    if m < 1:
        raise ValueError("m must be positive")
    K, L = S.check_set(K), S.check_set(L)
    _nonempty(K, L)
    cover = (K | L) <= (iterate(S, K, m) & iterate(S, L, m))
    meet = K & L
    if cover and not meet:
        return Turbulence.SEPARATED
    if cover and _at_most_one(meet):
        return Turbulence.TURBULENT
    return Turbulence.NEITHER


def _at_most_one(X: SetLike) -> bool:
    return X.at_most_one_point() if isinstance(X, LegSet) else len(X) <= 1


def chain_check(S: System, K0, K1, word: Sequence[int], j: int, m: int = 1) -> bool:
    """Check ``K_{i0} ⊆ f(K_{i1}) ⊆ f²(K_{i2}) ⊆ … ⊆ f^j(K_{ij})`` for the iterate ``f^m``."""
    K0, K1 = S.check_set(K0), S.check_set(K1)
    if K0 & K1:
        raise PreconditionError("sets-not-disjoint")
    if j == 0:
        return True
    if len(word) < j + 1 or any(b not in (0, 1) for b in word):
        raise ValueError("word must be binary with at least j + 1 letters")
    images = [K0, K1]
    prev = images[word[0]]
    for k in range(1, j + 1):
        images = [iterate(S, X, m) for X in images]
        cur = images[word[k]]
        if not prev <= cur:
            return False
        prev = cur
    return True


def graph_to_function_witness(S: System, w):
    """Separated pair ``(π_first(K), π_first(L))`` and ``m = level - 1`` from a graph witness."""
    if isinstance(S, FiniteSystem):
        if not isinstance(w, LevelWitness) or w.kind != "cr":
            raise MalformedInputError("need a cr level witness")
        if not verify_cr_witness(S.graph(), w):
            raise PreconditionError("witness-unverified")
        K0 = frozenset(t[0] for t in w.K)
        L0 = frozenset(t[0] for t in w.L)
    else:
        if not isinstance(w, IntervalWitness) or w.kind != "cr":
            raise MalformedInputError("need a cr interval witness")
        R = S.graph()
        if not check_interval_witness(R, w).verified:
            raise PreconditionError("witness-unverified")
        K0 = LegSet.of({0: first_projection(R, w.K)})
        L0 = LegSet.of({0: first_projection(R, w.L)})
    if w.level < 2:
        raise PreconditionError("level-too-small")
    if K0 & L0:
        # orbit tuples are determined by their first entry
        raise MalformedInputError("first projections meet, impossible for the graph of a map")
    m = w.level - 1
    if verify_turbulent(S, K0, L0, m) is not Turbulence.SEPARATED:
        raise AssertionError("extracted pair is not separated turbulent")
    return K0, L0, m


def function_to_graph_witness(S: System, K, L, m: int):
    """Orbit tuples of length ``m + 1`` seeded in ``K`` and ``L``, as a graph witness."""
    if verify_turbulent(S, K, L, m) is not Turbulence.SEPARATED:
        raise PreconditionError("pair-not-separated-turbulent")
    if isinstance(S, FiniteSystem):
        def orbit(x):
            out = [x]
            for _ in range(m):
                out.append(S(out[-1]))
            return tuple(out)

        w = LevelWitness(m + 1, frozenset(orbit(x) for x in K), frozenset(orbit(x) for x in L), "cr")
        if not verify_cr_witness(S.graph(), w):
            raise AssertionError("orbit witness failed verification")
        return w
    if len(S.legs) != 1:
        raise UnsupportedInputError("graph witnesses are only formed for single-leg systems")
    # on a graph every step is determined, so free steps are orbit steps
    w = IntervalWitness(m + 1, SetSpec(K.get(0), (), m), SetSpec(L.get(0), (), m), "cr")
    if not check_interval_witness(S.graph(), w).verified:
        raise AssertionError("orbit witness failed verification")
    return w


def star_lift(F, K, L):
    """Level-3 reverse-cr witness ``(K ⋆ K, L ⋆ L)`` from two sub-relations.

    Needs ``K, L ⊆ F``, ``π₁(K) = π₁(L)`` the whole carrier, and
    ``π₁(K ∩ L) ∩ π₂(K ∩ L) = ∅``.  Finite relations take edge sets;
    interval relations take single-branch sub-relations whose branch is a
    branch of ``F``.
    """
    if isinstance(F, FiniteRelation):
        return _star_lift_finite(F, frozenset(K), frozenset(L))
    if isinstance(F, IntervalRelation):
        return _star_lift_interval(F, K, L)
    raise UnsupportedInputError("star_lift takes a finite or interval relation")


def _star_lift_finite(F: FiniteRelation, K: frozenset, L: frozenset) -> LevelWitness:
    failures = []
    if not (K <= F.edges and L <= F.edges):
        failures.append("not-a-subrelation")
    carrier = set(F.ids)
    if {s for s, _ in K} != carrier or {s for s, _ in L} != carrier:
        failures.append("pi1-not-onto")
    meet = K & L
    if {s for s, _ in meet} & {t for _, t in meet}:
        failures.append("meet-projections-intersect")
    if failures:
        raise PreconditionError(failures)

    def star(E):
        succ = {}
        for s, t in E:
            succ.setdefault(s, []).append(t)
        return frozenset((x, y, z) for x, y in E for z in succ.get(y, ()))

    w = LevelWitness(3, star(K), star(L), REVERSE_CR)
    if not verify_cr_witness(F, w):
        raise AssertionError("lifted witness failed verification")
    return w


def _single_branch(F: IntervalRelation, part: IntervalRelation) -> int:
    if not isinstance(part, IntervalRelation) or len(part.branches) != 1 or part.verticals or part.horizontals or part.isolated:
        raise UnsupportedInputError("interval sub-relations must be single branches")
    try:
        return F.branches.index(part.branches[0])
    except ValueError:
        raise PreconditionError("not-a-subrelation") from None


def _star_lift_interval(F: IntervalRelation, K: IntervalRelation, L: IntervalRelation) -> IntervalWitness:
    ik, il = _single_branch(F, K), _single_branch(F, L)
    k, l = F.branches[ik], F.branches[il]
    failures = []
    if k.domain != (ZERO, ONE) or l.domain != (ZERO, ONE):
        failures.append("pi1-not-onto")
    meet = coincidence_set(k, l, IntervalUnion.unit())
    if meet & k.image(meet):
        failures.append("meet-projections-intersect")
    if failures:
        raise PreconditionError(failures)
    # reversed K ⋆ K tuples walk the inverse relation along k⁻¹ twice
    unit = IntervalUnion.unit()
    w = IntervalWitness(3, SetSpec(unit, (ik, ik), 0), SetSpec(unit, (il, il), 0), REVERSE_CR)
    if not check_interval_witness(F, w).verified:
        raise AssertionError("lifted witness failed verification")
    return w


def refine_pair(S: System, K0, K1, x):
    """Separated 2-turbulent pair ``(K0 ∩ f⁻¹(K0), K1 ∩ f⁻¹(K1))`` from a turbulent pair meeting at ``x``."""
    K0, K1 = S.check_set(K0), S.check_set(K1)
    _nonempty(K0, K1)
    if isinstance(S, FiniteSystem):
        junction = frozenset([x])
    else:
        x = (x[0], as_rational(x[1]))
        junction = LegSet.on_leg(x[0], (x[1], x[1]))
    if (K0 & K1) != junction:
        raise PreconditionError("meet-not-junction", "K0 ∩ K1 must be exactly {x}")
    if not (K0 | K1) <= (S.image(K0) & S.image(K1)):
        raise PreconditionError("pair-not-turbulent")
    if S(x) == x:
        raise TheoremInapplicableError("junction-fixed", "f(x) = x")
    K0r = K0 & S.preimage(K0)
    K1r = K1 & S.preimage(K1)
    if verify_turbulent(S, K0r, K1r, 2) is not Turbulence.SEPARATED:
        raise AssertionError("refined pair is not separated 2-turbulent")
    return K0r, K1r
