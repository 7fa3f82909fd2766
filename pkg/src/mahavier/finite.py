"""Dynamics of finite closed relations.

A finite relation ``F`` on a finite set ``X`` is a directed graph; the
Mahavier level of tuple length ``n`` is the set of walks with ``n``
vertices, and the one-sided Mahavier space is the vertex shift of the
graph.  Everything in this module is exact except the numeric value of the
entropy, whose zero/nonzero status is itself decided combinatorially.

Conventions
-----------
* A *level-n* tuple has ``n`` entries (it lives in ``X_F^{n-1}``).
* Tuples and point sets are ordered lexicographically by point id, and every
  "first found" result is first in that order.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, islice
from typing import Hashable, Iterable, Iterator, NamedTuple, Optional, Sequence

import networkx as nx
import numpy as np

from .errors import MalformedInputError, MalformedWitnessError, PreconditionError, ResourceLimitError

PointId = Hashable
PathTuple = tuple
CR = "cr"
REVERSE_CR = "reverse-cr"
WITNESS_KINDS = (CR, REVERSE_CR)


@dataclass(frozen=True)
class FiniteRelation:
    """A relation on a finite labeled point set.

    Parameters
    ----------
    points : sequence of (id, coords)
        Point ids must be unique and mutually comparable; coordinate vectors
        share a dimension and hold finite reals.
    edges : iterable of (id, id)
        Ordered pairs of declared point ids.
    """

    points: tuple[tuple[PointId, tuple[float, ...]], ...]
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        pts = tuple((pid, tuple(coords)) for pid, coords in self.points)
        ids = [pid for pid, _ in pts]
        if len(set(ids)) != len(ids):
            raise MalformedInputError("point ids must be unique")
        try:
            pts = tuple(sorted(pts, key=lambda p: p[0]))
        except TypeError:
            raise MalformedInputError("point ids must be mutually comparable") from None
        dims = {len(c) for _, c in pts}
        if len(dims) > 1:
            raise MalformedInputError("coordinate vectors must share one dimension")
        for _, coords in pts:
            for v in coords:
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise MalformedInputError(f"coordinate {v!r} is not a finite real")
        edges = frozenset((s, t) for s, t in self.edges)
        known = set(ids)
        for s, t in edges:
            if s not in known or t not in known:
                raise MalformedInputError(f"edge ({s!r}, {t!r}) uses an undeclared point")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], points: Optional[Iterable[PointId]] = None) -> "FiniteRelation":
        """Build a relation whose points default to the edge endpoints.

        Coordinates are the 1-d positions of the ids in sorted order.
        """
        edges = frozenset(tuple(e) for e in edges)
        ids = set(points) if points is not None else set()
        for s, t in edges:
            ids.update((s, t))
        ordered = sorted(ids)
        return cls(tuple((pid, (float(i),)) for i, pid in enumerate(ordered)), edges)

    @classmethod
    def full(cls, n: int) -> "FiniteRelation":
        return cls.from_edges(((i, j) for i in range(n) for j in range(n)), points=range(n))

    @property
    def ids(self) -> tuple:
        return tuple(pid for pid, _ in self.points)

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def successors(self) -> dict:
        succ = {pid: [] for pid in self.ids}
        for s, t in self.edges:
            succ[s].append(t)
        return {pid: tuple(sorted(v)) for pid, v in succ.items()}

    @cached_property
    def predecessors(self) -> dict:
        pred = {pid: [] for pid in self.ids}
        for s, t in self.edges:
            pred[t].append(s)
        return {pid: tuple(sorted(v)) for pid, v in pred.items()}

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def inverse(self) -> "FiniteRelation":
        return FiniteRelation(self.points, frozenset((t, s) for s, t in self.edges))

    def restrict(self, keep: Iterable[PointId]) -> "FiniteRelation":
        keep = set(keep)
        return FiniteRelation(
            tuple(p for p in self.points if p[0] in keep),
            frozenset((s, t) for s, t in self.edges if s in keep and t in keep),
        )

    def is_functional(self) -> bool:
        return all(len(v) == 1 for v in self.successors.values())

    def is_walk(self, p: Sequence) -> bool:
        return len(p) >= 1 and p[0] in self.successors and all(
            (a, b) in self.edges for a, b in zip(p, p[1:])
        )


def inverse(R: FiniteRelation) -> FiniteRelation:
    return R.inverse()


def mahavier_level(R: FiniteRelation, n: int) -> tuple[PathTuple, ...]:
    """All walks with ``n`` entries, in lexicographic order."""
    if n < 1:
        raise ValueError("tuple length must be at least 1")
    out = []
    succ = R.successors

    def extend(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for w in succ[prefix[-1]]:
            prefix.append(w)
            extend(prefix)
            prefix.pop()

    for v in R.ids:
        extend([v])
    return tuple(out)


def walk_count(R: FiniteRelation, n: int) -> int:
    """Number of walks with ``n`` entries, by dynamic programming."""
    if n < 1:
        raise ValueError("tuple length must be at least 1")
    counts = {v: 1 for v in R.ids}
    for _ in range(n - 1):
        counts = {v: sum(counts[w] for w in R.successors[v]) for v in R.ids}
    return sum(counts.values())


def shift_tuple(p: Sequence) -> PathTuple:
    if len(p) < 2:
        raise ValueError("cannot shift a tuple of length 1")
    return tuple(p[1:])


def forward_trim(R: FiniteRelation) -> FiniteRelation:
    """Iteratively delete points without outgoing edges.

    The survivors are exactly the first coordinates of infinite walks.
    """
    out_deg = {v: len(s) for v, s in R.successors.items()}
    dead = deque(v for v, d in out_deg.items() if d == 0)
    removed = set()
    while dead:
        v = dead.popleft()
        if v in removed:
            continue
        removed.add(v)
        for u in R.predecessors[v]:
            if u not in removed:
                out_deg[u] -= 1
                if out_deg[u] == 0:
                    dead.append(u)
    return R.restrict(v for v in R.ids if v not in removed)


def _graph(R: FiniteRelation) -> nx.DiGraph:
    G = nx.DiGraph()
    G.add_nodes_from(R.ids)
    G.add_edges_from(R.edges)
    return G


def _components(R: FiniteRelation):
    """Strongly connected components with their internal edge counts."""
    G = _graph(R)
    for comp in nx.strongly_connected_components(G):
        inner = sum(1 for s, t in R.edges if s in comp and t in comp)
        yield sorted(comp), inner


class EntropyEstimate(NamedTuple):
    value: float
    method: str
    samples: tuple = ()


def entropy(R: FiniteRelation) -> EntropyEstimate:
    """Entropy of the shift on the infinite Mahavier product, in nats.

    The value is ``log`` of the spectral radius of the adjacency matrix of
    the forward-trimmed relation, taken as the maximum over strongly
    connected components.  A component contributes zero unless it has more
    internal edges than vertices (a simple cycle or a lone vertex has at
    most one), so the zero case is exact.
    """
    T = forward_trim(R)
    best = 0.0
    for comp, inner in _components(T):
        if inner <= len(comp):
            continue
        index = {v: i for i, v in enumerate(comp)}
        A = np.zeros((len(comp), len(comp)))
        for s, t in T.edges:
            if s in index and t in index:
                A[index[s], index[t]] = 1.0
        rho = float(max(abs(np.linalg.eigvals(A))))
        best = max(best, math.log(rho))
    return EntropyEstimate(best, "spectral")


def entropy_growth(R: FiniteRelation, m_max: int) -> EntropyEstimate:
    """Walk-count growth estimate ``log|X_F^m| / m`` for ``m = 1..m_max``.

    ``|X_F^m|`` counts tuples with ``m + 1`` entries.  Counts are exact
    integers; a relation with no walks of some length contributes 0.
    """
    if m_max < 2:
        raise ValueError("m_max must be at least 2")
    counts = {v: 1 for v in R.ids}
    samples = []
    for m in range(1, m_max + 1):
        counts = {v: sum(counts[w] for w in R.successors[v]) for v in R.ids}
        total = sum(counts.values())
        samples.append((m, math.log(total) / m if total else 0.0))
    return EntropyEstimate(samples[-1][1], "growth", tuple(samples))


class DoubleLoop(NamedTuple):
    x: PathTuple
    y: PathTuple
    j: int


def _saturated_powers(R: FiniteRelation, lengths: int):
    ids = R.ids
    index = {v: i for i, v in enumerate(ids)}
    A = np.zeros((len(ids), len(ids)), dtype=np.int64)
    for s, t in R.edges:
        A[index[s], index[t]] = 1
    P = np.eye(len(ids), dtype=np.int64)
    for ell in range(1, lengths + 1):
        P = np.minimum(P @ A, 2)
        yield ell, P, index


def _closed_walks(R: FiniteRelation, v, ell: int) -> Iterator[PathTuple]:
    """Closed walks from ``v`` with ``ell`` edges, lexicographically."""
    # can_finish[r] is the set of points with a walk of exactly r edges to v
    can_finish = [{v}]
    for _ in range(ell):
        prev = can_finish[-1]
        can_finish.append({u for u in R.ids if any(w in prev for w in R.successors[u])})

    def walk(prefix, remaining):
        if remaining == 0:
            yield tuple(prefix)
            return
        for w in R.successors[prefix[-1]]:
            if w in can_finish[remaining - 1]:
                prefix.append(w)
                yield from walk(prefix, remaining - 1)
                prefix.pop()

    if v in can_finish[ell]:
        yield from walk([v], ell)


def double_loop_witness(R: FiniteRelation) -> Optional[DoubleLoop]:
    """Two distinct closed walks of equal length through a common point.

    Lengths are scanned upward and points in id order; the two walks are
    the lexicographically first pair at the first length and point that
    admit two.  ``j`` is the 1-based index of the first difference.
    Lengths beyond the square of the largest component size never need to
    be examined.
    """
    if not R.edges:
        return None
    bound = max(len(comp) for comp, _ in _components(R)) ** 2
    for ell, P, index in _saturated_powers(R, bound):
        for v in R.ids:
            if P[index[v], index[v]] >= 2:
                x, y = islice(_closed_walks(R, v, ell), 2)
                j = next(i for i, (a, b) in enumerate(zip(x, y)) if a != b) + 1
                return DoubleLoop(x, y, j)
    return None


@dataclass(frozen=True)
class LevelWitness:
    """Two disjoint nonempty sets of level-``level`` tuples."""

    level: int
    K: frozenset
    L: frozenset
    kind: str = CR

    def __post_init__(self):
        K = frozenset(tuple(t) for t in self.K)
        L = frozenset(tuple(t) for t in self.L)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "L", L)
        if self.kind not in WITNESS_KINDS:
            raise MalformedWitnessError(f"unknown witness kind {self.kind!r}")
        if not isinstance(self.level, int) or self.level < 1:
            raise MalformedWitnessError("witness level must be a positive integer")
        if not K or not L:
            raise MalformedWitnessError("witness sets must be nonempty")
        if K & L:
            raise MalformedWitnessError("witness sets must be disjoint")
        for t in K | L:
            if len(t) != self.level:
                raise MalformedWitnessError(f"tuple {t!r} does not have length {self.level}")

    def reversed(self, kind: Optional[str] = None) -> "LevelWitness":
        return LevelWitness(
            self.level,
            frozenset(t[::-1] for t in self.K),
            frozenset(t[::-1] for t in self.L),
            kind or self.kind,
        )


class TurbulenceResult(NamedTuple):
    verdict: bool
    witness: Optional[LevelWitness]


def concat(x: PathTuple, y: PathTuple) -> PathTuple:
    """``x ⋆ y``: join two tuples that share the junction entry."""
    if x[-1] != y[0]:
        raise ValueError("tuples do not meet")
    return tuple(x) + tuple(y[1:])


def is_cr_turbulent(R: FiniteRelation) -> TurbulenceResult:
    loop = double_loop_witness(R)
    if loop is None:
        return TurbulenceResult(False, None)
    level = len(loop.x) + len(loop.y) - 1
    w = LevelWitness(level, frozenset([concat(loop.x, loop.y)]), frozenset([concat(loop.y, loop.x)]), CR)
    return TurbulenceResult(True, w)


def is_reverse_cr_turbulent(R: FiniteRelation) -> TurbulenceResult:
    verdict, w = is_cr_turbulent(R.inverse())
    if not verdict:
        return TurbulenceResult(False, None)
    return TurbulenceResult(True, w.reversed(REVERSE_CR))


def is_uncountable(R: FiniteRelation) -> bool:
    """Whether the infinite Mahavier product is uncountable.

    That happens exactly when some point of the trimmed relation has two
    distinct successors from which it is reachable again, i.e. two
    different returns.
    """
    T = forward_trim(R)
    for v in T.ids:
        returning = [w for w in T.successors[v] if _reaches(T, w, v)]
        if len(returning) >= 2:
            return True
    return False


def _reaches(R: FiniteRelation, src, dst) -> bool:
    seen = {src}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            return True
        for w in R.successors[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return False


def check_witness_shape(R: FiniteRelation, w: LevelWitness) -> None:
    for t in sorted(w.K | w.L):
        if not R.is_walk(t):
            raise MalformedWitnessError(f"tuple {t!r} is not in the Mahavier level {w.level - 1}")


def projections(S: Iterable[PathTuple]) -> tuple[frozenset, frozenset]:
    S = list(S)
    return frozenset(t[0] for t in S), frozenset(t[-1] for t in S)


def witness_inclusion_gap(R: FiniteRelation, w: LevelWitness) -> frozenset:
    """Points required by the witness inclusion that are missing.

    Empty exactly when the witness verifies.  Raises
    :class:`MalformedWitnessError` for tuples that are not walks of ``R``.
    """
    check_witness_shape(R, w)
    fK, lK = projections(w.K)
    fL, lL = projections(w.L)
    if w.kind == REVERSE_CR:
        fK, lK, fL, lL = lK, fK, lL, fL
    return frozenset((fK | fL) - (lK & lL))


def verify_cr_witness(R: FiniteRelation, w: LevelWitness) -> bool:
    return not witness_inclusion_gap(R, w)


def brute_force_cr_witness(
    R: FiniteRelation,
    n: int,
    size_cap: int,
    *,
    max_tuples: int = 200_000,
    max_subsets: int = 2_000_000,
) -> Optional[LevelWitness]:
    """Exhaustive search for a CR witness at tuple length ``n``.

    Candidate sets are all subsets of the level with at most ``size_cap``
    tuples, ordered by size and then lexicographically; pairs are scanned
    with ``K`` in the outer loop.  A set ``S`` can only occur in a witness
    if ``π_first(S) ⊆ π_last(S)``, so other sets are skipped.  With
    ``size_cap == 1`` the pairs are counted rather than enumerated, so long
    levels stay cheap.
    """
    if n < 1 or size_cap < 1:
        raise ValueError("level and size cap must be positive")
    if size_cap == 1:
        return _singleton_witness(R, n)
    total = walk_count(R, n)
    if total > max_tuples:
        raise ResourceLimitError(f"level {n} has {total} tuples (guard {max_tuples})")
    level = mahavier_level(R, n)
    n_subsets = sum(math.comb(len(level), k) for k in range(1, size_cap + 1))
    if n_subsets > max_subsets:
        raise ResourceLimitError(f"{n_subsets} candidate sets (guard {max_subsets})")
    point_bit = {v: 1 << i for i, v in enumerate(R.ids)}
    firsts = [point_bit[t[0]] for t in level]
    lasts = [point_bit[t[-1]] for t in level]
    candidates = []
    for k in range(1, size_cap + 1):
        for combo in combinations(range(len(level)), k):
            f = l = mask = 0
            for i in combo:
                f |= firsts[i]
                l |= lasts[i]
                mask |= 1 << i
            if f & ~l == 0:
                candidates.append((combo, f, l, mask))
    for combo_k, fk, lk, mk in candidates:
        for combo_l, fl, ll, ml in candidates:
            if mk & ml:
                continue
            if (fk | fl) & ~(lk & ll) == 0:
                return LevelWitness(
                    n,
                    frozenset(level[i] for i in combo_k),
                    frozenset(level[i] for i in combo_l),
                    CR,
                )
    return None


def _singleton_witness(R: FiniteRelation, n: int) -> Optional[LevelWitness]:
    # singletons {x}, {y} verify iff x != y are closed walks at one point;
    # closed-walk counts per point avoid materializing the level
    if n < 2:
        return None
    counts = {}
    for v in R.ids:
        row = {u: int(u == v) for u in R.ids}
        for _ in range(n - 1):
            row = {u: sum(row[w] for w in R.predecessors[u]) for u in R.ids}
        counts[v] = row[v]
    for v in R.ids:
        if counts[v] >= 2:
            x, y = islice(_closed_walks(R, v, n - 1), 2)
            return LevelWitness(n, frozenset([x]), frozenset([y]), CR)
    return None


def itinerary_realization(R: FiniteRelation, w: LevelWitness, word: Sequence[int]) -> PathTuple:
    """A tuple whose consecutive blocks follow ``word`` through ``K`` and ``L``.

    Block ``i`` (1-based) occupies positions ``(i-1)(n-1)+1 .. i(n-1)+1`` and
    lies in ``K`` when ``word[i-1] == 0`` and in ``L`` otherwise.  The tuple
    is assembled from the last block backwards, each time prepending the
    first (canonical order) element of the required set that ends where the
    current tuple starts.
    """
    if w.kind != CR:
        raise PreconditionError("witness-kind", "itineraries need a cr witness")
    if not verify_cr_witness(R, w):
        raise PreconditionError("witness-unverified")
    if len(word) < 1 or any(b not in (0, 1) for b in word):
        raise ValueError("word must be a nonempty binary sequence")
    blocks = (sorted(w.K), sorted(w.L))
    current = blocks[word[-1]][0]
    for bit in reversed(word[:-1]):
        head = next(t for t in blocks[bit] if t[-1] == current[0])
        current = concat(head, current)
    return current


def non_turbulence_conditions(R: FiniteRelation, a, b) -> bool:
    """Sufficient conditions for a relation not to be CR-turbulent.

    (1) only ``a`` maps to ``a``; (2) ``b`` maps only to ``b``; (3) any point
    with two distinct preimages involves ``a`` or ``b``.
    """
    if a == b:
        raise PreconditionError("a-equals-b")
    ids = set(R.ids)
    if a not in ids or b not in ids:
        raise PreconditionError("undeclared-point")
    if any(x != a for x in R.predecessors[a]):
        return False
    if any(x != b for x in R.successors[b]):
        return False
    ab = {a, b}
    for u, pre in R.predecessors.items():
        if len(pre) >= 2 and u not in ab:
            if len([s for s in pre if s not in ab]) >= 2:
                return False
    return True
