"""Relations ``Γ(f) ∪ Γ(g)`` of an expanding and a contracting branch.

Standing hypotheses, all checked exactly:

* ``f`` is a strictly increasing PL map of ``[0, a]`` onto ``[0, 1]`` with
  ``0 < a < 1`` and ``f(x) > x`` on ``(0, a]``;
* ``g`` is a strictly increasing PL map of ``[0, 1]`` onto ``[0, b]`` with
  ``0 < b < 1`` and ``g(x) < x`` on ``(0, 1]``.

Such relations are CR-turbulent and reverse CR-turbulent.  This module
computes the covering parameters and searches, with exact verification,
for the least number of free steps that makes the two witness sets cover.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import MalformedInputError, MalformedWitnessError, PreconditionError, WitnessSearchError
from .intervals import IntervalUnion, as_rational, format_rational
from .interval_relation import IntervalRelation
from .plmaps import ONE, ZERO, PLBranch, coincidence_set

CR = "cr"
REVERSE_CR = "reverse-cr"
N_CAP = 64


def _above_diagonal(branch: PLBranch) -> bool:
    # PL minus identity is linear per cell; positive at every breakpoint but 0
    return all(y > x for x, y in zip(branch.xs, branch.ys) if x > 0)


def _below_diagonal(branch: PLBranch) -> bool:
    return all(y < x for x, y in zip(branch.xs, branch.ys) if x > 0)


def f_hypothesis_failures(f: PLBranch) -> list[str]:
    bad = []
    lo, hi = f.domain
    if not f.increasing:
        bad.append("f-increasing")
    if lo != 0 or not 0 < hi < 1:
        bad.append("f-domain")
    if f.xs[0] != 0 or f(f.xs[0]) != 0:
        bad.append("f-fixes-origin")
    if f.ys[-1] != 1:
        bad.append("f-onto")
    if not _above_diagonal(f):
        bad.append("f-strict-above-diagonal")
    return bad


def g_hypothesis_failures(g: PLBranch) -> list[str]:
    bad = []
    if not g.increasing:
        bad.append("g-increasing")
    if g.domain != (ZERO, ONE):
        bad.append("g-domain")
    if g.ys[0] != 0:
        bad.append("g-fixes-origin")
    if not 0 < g.ys[-1] < 1:
        bad.append("g-range")
    if not _below_diagonal(g):
        bad.append("g-strict-below-diagonal")
    return bad


@dataclass(frozen=True)
class FUnionG(IntervalRelation):
    """A validated ``Γ(f) ∪ Γ(g)``; ``f_index``/``g_index`` locate the branches."""

    f_index: int = 0
    g_index: int = 1

    def __post_init__(self):
        super().__post_init__()
        if self.verticals or self.horizontals or self.isolated or len(self.branches) != 2:
            raise MalformedInputError("an f∪g relation has exactly two branches and nothing else")
        if {self.f_index, self.g_index} != {0, 1}:
            raise MalformedInputError("branch indices must be 0 and 1")
        failures = f_hypothesis_failures(self.f) + g_hypothesis_failures(self.g)
        if failures:
            raise PreconditionError(failures, "f∪g hypotheses violated: " + ", ".join(failures))

    @property
    def f(self) -> PLBranch:
        return self.branches[self.f_index]

    @property
    def g(self) -> PLBranch:
        return self.branches[self.g_index]

    @property
    def a(self) -> Fraction:
        return self.f.domain[1]

    @property
    def b(self) -> Fraction:
        return self.g.ys[-1]

    def inverse(self) -> "FUnionG":
        # g⁻¹ expands and f⁻¹ contracts; branch order is kept
        base = IntervalRelation.inverse(self)
        return FUnionG(base.branches, f_index=self.g_index, g_index=self.f_index)

    def as_plain(self) -> IntervalRelation:
        return IntervalRelation(self.branches)


def construct_f_union_g(f: PLBranch, g: PLBranch) -> FUnionG:
    return FUnionG((f, g), f_index=0, g_index=1)


def linear_pair(a, b) -> FUnionG:
    """``{(x, a x) : x ∈ [0, 1]} ∪ {(x, b x) : x ∈ [0, 1/b]}`` with ``0 < a < 1 < b``."""
    a, b = as_rational(a), as_rational(b)
    if not 0 < a < 1:
        raise PreconditionError("a-range", f"need 0 < a < 1, got {a}")
    if not b > 1:
        raise PreconditionError("b-range", f"need b > 1, got {b}")
    return construct_f_union_g(PLBranch.linear(b, 1 / b), PLBranch.linear(a, 1))


def as_f_union_g(R: IntervalRelation) -> FUnionG:
    """Recognize ``R`` as an f∪g relation, in either branch order."""
    if isinstance(R, FUnionG):
        return R
    if R.verticals or R.horizontals or R.isolated or len(R.branches) != 2:
        raise PreconditionError("not-f-union-g", "relation is not a union of two branches")
    errors = []
    for fi in (0, 1):
        try:
            return FUnionG(R.branches, f_index=fi, g_index=1 - fi)
        except PreconditionError as exc:
            errors.append(exc)
    best = min(errors, key=lambda e: len(e.names))
    raise best


def _iterate(fn, x, k):
    for _ in range(k):
        x = fn(x)
    return x


@dataclass(frozen=True)
class CoveringParams:
    """Parameters of the covering argument for a validated f∪g relation.

    ``p`` is the parameter the values were computed for; ``requested_p``
    records what the caller asked for when the search had to lower it.
    ``N`` is filled in by the witness search.
    """

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    z: Fraction
    p: Fraction
    M: int
    N: Optional[int] = None
    case: int = 1
    requested_p: Optional[Fraction] = None

    def __post_init__(self):
        if not 0 < self.z <= self.alpha:
            raise MalformedInputError("covering parameters need 0 < z ≤ α")
        if self.M < 1:
            raise MalformedInputError("covering parameters need M ≥ 1")

    def to_json(self) -> dict:
        r = format_rational
        out = {
            "alpha": r(self.alpha),
            "beta": r(self.beta),
            "gamma": r(self.gamma),
            "z": r(self.z),
            "p": r(self.p),
            "M": self.M,
            "N": self.N,
            "case": self.case,
        }
        if self.requested_p is not None:
            out["requested_p"] = r(self.requested_p)
        return out


def covering_parameters(R, p) -> CoveringParams:
    """α, z, M, β, γ for parameter ``p``.

    ``α = f⁻¹(g(1))``.  If ``a ≤ p`` then ``z = f⁻¹(g(p))`` and ``M = 1``.
    Otherwise ``M`` is the least ``m`` with ``f^{m-2}(p) < a ≤ f^{m-1}(p)``
    and ``z = f^{-M}(g^M(p))``.  Finally ``β = g⁻¹(z)`` and ``γ = f⁻¹(α)``.
    """
    R = as_f_union_g(R)
    p = as_rational(p)
    if not 0 < p < 1:
        raise PreconditionError("p-range", f"need 0 < p < 1, got {p}")
    f, g = R.f, R.g
    finv, ginv = f.inverse(), g.inverse()
    alpha = finv(g(ONE))
    if R.a <= p:
        case, M = 1, 1
        z = finv(g(p))
    else:
        case = 2
        # f^{m-2}(p) < a holds for m = 2; advance until f^{m-1}(p) reaches a
        M, prev = 2, p
        while f(prev) < R.a:
            prev = f(prev)
            M += 1
        z = _iterate(finv, _iterate(g, p, M), M)
    return CoveringParams(alpha=alpha, beta=ginv(z), gamma=finv(alpha), z=z, p=p, M=M, case=case)


# -- interval witnesses ----------------------------------------------------


class SetSpec(NamedTuple):
    """Tuples ``(x_1, ..., x_n)`` with ``x_1 ∈ first``, forced then free steps.

    Step ``i`` (1-based) for ``i ≤ len(prefix)`` is ``x_{i+1} = branch[prefix[i-1]](x_i)``;
    each of the following ``free`` steps may use any part of the relation.
    """

    first: IntervalUnion
    prefix: tuple[int, ...]
    free: int

    @property
    def level(self) -> int:
        return 1 + len(self.prefix) + self.free

    def to_json(self) -> dict:
        return {"first": self.first.to_json(), "prefix": list(self.prefix), "free": self.free}

    @classmethod
    def from_json(cls, data) -> "SetSpec":
        return cls(IntervalUnion.from_json(data["first"]), tuple(int(i) for i in data["prefix"]), int(data["free"]))

    def with_free(self, free: int) -> "SetSpec":
        return SetSpec(self.first, self.prefix, free)


@dataclass(frozen=True)
class IntervalWitness:
    """Two tuple-set specifications at a common level.

    For ``kind == "reverse-cr"`` the specifications describe tuples of the
    inverse relation; reversing them gives tuples of the relation itself,
    with first and last coordinates exchanged.
    """

    level: int
    K: SetSpec
    L: SetSpec
    kind: str = CR
    params: Optional[CoveringParams] = None

    def __post_init__(self):
        if self.kind not in (CR, REVERSE_CR):
            raise MalformedWitnessError(f"unknown witness kind {self.kind!r}")
        for name, spec in (("K", self.K), ("L", self.L)):
            if spec.first.is_empty:
                raise MalformedWitnessError(f"{name} has an empty first-coordinate set")
            if spec.free < 0:
                raise MalformedWitnessError(f"{name} has a negative free-suffix length")
            if spec.free == 0 and not spec.prefix:
                raise MalformedWitnessError(f"{name} has neither forced nor free steps")
            if spec.level != self.level:
                raise MalformedWitnessError(f"{name} describes level {spec.level}, not {self.level}")
            if not (spec.first <= IntervalUnion.unit()):
                raise MalformedWitnessError(f"{name} first-coordinate set leaves [0, 1]")
        if self.level < 2:
            raise MalformedWitnessError("interval witnesses need level ≥ 2")

    def truncated(self, steps: int = 1) -> "IntervalWitness":
        """The same witness with ``steps`` fewer free steps in both sets."""
        return IntervalWitness(
            self.level - steps,
            self.K.with_free(self.K.free - steps),
            self.L.with_free(self.L.free - steps),
            self.kind,
            self.params,
        )

    def to_json(self) -> dict:
        out = {"level": self.level, "kind": self.kind, "K": self.K.to_json(), "L": self.L.to_json()}
        if self.params is not None:
            out["params"] = self.params.to_json()
        return out

    @classmethod
    def from_json(cls, data) -> "IntervalWitness":
        return cls(
            int(data["level"]),
            SetSpec.from_json(data["K"]),
            SetSpec.from_json(data["L"]),
            data.get("kind", CR),
        )


def _branch(R: IntervalRelation, index: int) -> PLBranch:
    if not 0 <= index < len(R.branches):
        raise MalformedWitnessError(f"branch index {index} out of range")
    return R.branches[index]


def _extendable(R: IntervalRelation, steps: int) -> IntervalUnion:
    """Points from which ``steps`` further steps of ``R`` exist."""
    inv = R.inverse()
    D = IntervalUnion.unit()
    for _ in range(steps):
        D = inv.image(D)
    return D


def first_projection(R: IntervalRelation, spec: SetSpec) -> IntervalUnion:
    S = _extendable(R, spec.free)
    for i in reversed(spec.prefix):
        S = _branch(R, i).preimage(S)
    return spec.first & S


def forced_image(R: IntervalRelation, spec: SetSpec) -> IntervalUnion:
    S = first_projection(R, spec)
    for i in spec.prefix:
        S = _branch(R, i).image(S)
    return S


def last_projection(R: IntervalRelation, spec: SetSpec) -> IntervalUnion:
    S = forced_image(R, spec)
    for _ in range(spec.free):
        S = R.image(S)
    return S


def common_tuples_exist(R: IntervalRelation, K: SetSpec, L: SetSpec) -> bool:
    """Whether the two specifications share a tuple.

    ``C`` tracks the current coordinates of tuples that agree so far.  Two
    forced steps keep only the exact coincidence set of their branches; a
    free step can always copy the other side.
    """
    C = first_projection(R, K) & first_projection(R, L)
    for step in range(K.level - 1):
        if C.is_empty:
            return False
        pk = K.prefix[step] if step < len(K.prefix) else None
        pl = L.prefix[step] if step < len(L.prefix) else None
        if pk is not None and pl is not None:
            p, q = _branch(R, pk), _branch(R, pl)
            C = p.image(coincidence_set(p, q, C))
        elif pk is not None or pl is not None:
            C = _branch(R, pk if pk is not None else pl).image(C)
        else:
            C = R.image(C)
    return not C.is_empty


@dataclass(frozen=True)
class WitnessCheck:
    """Outcome of checking an interval witness, with every projection kept."""

    verified: bool
    first_K: IntervalUnion
    first_L: IntervalUnion
    last_K: IntervalUnion
    last_L: IntervalUnion

    @property
    def required(self) -> IntervalUnion:
        return self.first_K | self.first_L

    @property
    def missing_from_last_K(self) -> IntervalUnion:
        return self.required.uncovered_by(self.last_K)

    @property
    def missing_from_last_L(self) -> IntervalUnion:
        return self.required.uncovered_by(self.last_L)

    def to_json(self) -> dict:
        return {
            "verified": self.verified,
            "first_K": self.first_K.to_json(),
            "first_L": self.first_L.to_json(),
            "last_K": self.last_K.to_json(),
            "last_L": self.last_L.to_json(),
            "missing_from_last_K": self.missing_from_last_K.to_json(),
            "missing_from_last_L": self.missing_from_last_L.to_json(),
        }


def check_interval_witness(R: IntervalRelation, w: IntervalWitness) -> WitnessCheck:
    """Exact check of the witness inclusion.

    Raises :class:`MalformedWitnessError` when a specification describes no
    tuples or the two sets intersect.  For ``reverse-cr`` the check runs on
    the inverse relation.
    """
    base = R.inverse() if w.kind == REVERSE_CR else R
    fK, fL = first_projection(base, w.K), first_projection(base, w.L)
    if fK.is_empty or fL.is_empty:
        raise MalformedWitnessError("a witness set describes no tuples")
    if common_tuples_exist(base, w.K, w.L):
        raise MalformedWitnessError("witness sets are not disjoint")
    lK, lL = last_projection(base, w.K), last_projection(base, w.L)
    ok = (fK | fL) <= (lK & lL)
    return WitnessCheck(ok, fK, fL, lK, lL)


def verify_interval_cr_witness(R: IntervalRelation, w: IntervalWitness) -> bool:
    return check_interval_witness(R, w).verified


def _search(R: FUnionG, p, kind: str, cap: int) -> IntervalWitness:
    p = as_rational(p)
    if not 0 < p < 1:
        raise PreconditionError("p-range", f"need 0 < p < 1, got {p}")
    # the forced g-step lands in [z, g(1)], so [z, p] is only covered when p ≤ g(1)
    used = min(p, R.b)
    params = covering_parameters(R, used)
    first_K = IntervalUnion.of((params.beta, ONE))
    first_L = IntervalUnion.of((params.gamma, R.a))
    K0 = SetSpec(first_K, (R.g_index,), 0)
    L0 = SetSpec(first_L, (R.f_index,), 0)
    required = first_projection(R, K0) | first_projection(R, L0)
    last_K, last_L = forced_image(R, K0), forced_image(R, L0)
    free = 0
    for N in range(cap + 1):
        target = params.M + N - 1
        while free < target:
            last_K, last_L = R.image(last_K), R.image(last_L)
            free += 1
        if target < 1:
            continue
        if required <= (last_K & last_L):
            found = CoveringParams(
                params.alpha, params.beta, params.gamma, params.z, params.p, params.M, N, params.case,
                p if used != p else None,
            )
            w = IntervalWitness(1 + 1 + target, K0.with_free(target), L0.with_free(target), kind, found)
            return w
    raise WitnessSearchError(
        f"no verified witness with N ≤ {cap}",
        {
            "params": params.to_json(),
            "required": required.to_json(),
            "last_K": last_K.to_json(),
            "last_L": last_L.to_json(),
        },
    )


def cr_witness_search(R, p, *, cap: int = N_CAP) -> IntervalWitness:
    """Least-``N`` witness ``K`` (from ``[β, 1]`` through ``g``) and ``L`` (from ``[γ, a]`` through ``f``).

    Both sets take ``M + N - 1 ≥ 1`` free steps.  The returned witness is
    checked with :func:`verify_interval_cr_witness` before it is returned.
    """
    R = as_f_union_g(R)
    w = _search(R, p, CR, cap)
    if not verify_interval_cr_witness(R, w):
        raise WitnessSearchError("search result failed verification", {"witness": w.to_json()})
    return w


def reverse_cr_witness_search(R, p, *, cap: int = N_CAP) -> IntervalWitness:
    """Reverse witness: the same search on the inverse relation."""
    R = as_f_union_g(R)
    w = _search(R.inverse(), p, REVERSE_CR, cap)
    if not verify_interval_cr_witness(R, w):
        raise WitnessSearchError("search result failed verification", {"witness": w.to_json()})
    return w
