"""Analysis reports: verdicts with provenance, witnesses and checks."""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations
from typing import Optional

from . import finite as fin
from .branch_pair import (
    FUnionG,
    as_f_union_g,
    check_interval_witness,
    cr_witness_search,
    reverse_cr_witness_search,
)
from .documents import canonical_digest, level_witness_to_json, pair_to_json, relation_to_json
from .errors import MahavierError, MalformedInputError, PreconditionError, ResourceLimitError
from .intervals import IntervalUnion
from .interval_relation import IntervalRelation, discretize, non_turbulence_conditions_interval
from .plmaps import ONE, ZERO, check_function_pieces
from .transforms import (
    LegSet,
    LegSystem,
    Turbulence,
    function_to_graph_witness,
    verify_turbulent,
)

DEFAULT_P = Fraction(1, 2)
DEFAULT_LEVEL_CAP = 4
DEFAULT_SIZE_CAP = 1
GROWTH_M_MAX = 40


class _Timer:
    def __init__(self):
        self.timings = {}

    @contextmanager
    def __call__(self, name):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = time.perf_counter() - start


def verdict(value, by: str, **extra) -> dict:
    out = {"value": value, "by": by}
    out.update(extra)
    return out


def check(name: str, passed: Optional[bool], detail: str = "") -> dict:
    out = {"name": name, "passed": passed}
    if detail:
        out["detail"] = detail
    return out


def analyze(relation, *, level_cap: int = DEFAULT_LEVEL_CAP, size_cap: int = DEFAULT_SIZE_CAP, p=DEFAULT_P, timings: bool = True) -> dict:
    """Build the report for a finite relation, interval relation or leg system."""
    timer = _Timer()
    if isinstance(relation, fin.FiniteRelation):
        body = _analyze_finite(relation, level_cap, size_cap, timer)
    elif isinstance(relation, LegSystem):
        body = _analyze_legs(relation, timer)
    elif isinstance(relation, IntervalRelation):
        body = _analyze_interval(relation, p, level_cap, timer)
    else:
        raise TypeError(f"cannot analyze {type(relation).__name__}")
    doc = relation_to_json(relation)
    body["input"] = {"kind": body.pop("kind"), "digest": canonical_digest(doc)}
    if timings:
        body["timings"] = {k: round(v, 6) for k, v in sorted(timer.timings.items())}
    return body


# -- finite ----------------------------------------------------------------


def _analyze_finite(R: fin.FiniteRelation, level_cap: int, size_cap: int, timer) -> dict:
    with timer("entropy"):
        ent = fin.entropy(R)
    with timer("entropy_growth"):
        growth = fin.entropy_growth(R, GROWTH_M_MAX)
    with timer("cr"):
        cr = fin.is_cr_turbulent(R)
    with timer("reverse_cr"):
        rcr = fin.is_reverse_cr_turbulent(R)
    with timer("uncountable"):
        unc = fin.is_uncountable(R)
    loop = fin.double_loop_witness(R)

    checks = []
    witnesses = {}
    for name, res in (("cr", cr), ("reverse_cr", rcr)):
        if res.witness is not None:
            witnesses[name] = level_witness_to_json(res.witness)
            checks.append(check(f"verify_cr_witness[{name}]", fin.verify_cr_witness(R, res.witness)))
    agree = cr.verdict == (ent.value > 0) == (loop is not None) == unc
    checks.append(check("equivalence: cr ⟺ entropy > 0 ⟺ double loop ⟺ uncountable", agree))
    if cr.witness is not None:
        bound = math.log(2) / (cr.witness.level - 1)
        checks.append(check("entropy ≥ ln 2 / (level - 1)", ent.value >= bound - 1e-12, f"bound {bound:.12g}"))
    with timer("brute_force"):
        checks.append(_brute_force_check(R, cr.verdict, level_cap, size_cap))

    return {
        "kind": "finite",
        "verdicts": {
            "cr_turbulent": verdict(cr.verdict, "is_cr_turbulent: double closed walk, K = {x⋆y}, L = {y⋆x}"),
            "reverse_cr_turbulent": verdict(rcr.verdict, "is_reverse_cr_turbulent: is_cr_turbulent of the inverse, tuples reversed"),
            "uncountable": verdict(unc, "is_uncountable: some point has two distinct returning successors"),
            "entropy": verdict(ent.value, "entropy: log spectral radius of the trimmed relation", method=ent.method),
        },
        "entropy_growth": {"m_max": GROWTH_M_MAX, "final": growth.value},
        "witnesses": witnesses,
        "checks": checks,
    }


def _brute_force_check(R, expected: bool, level_cap: int, size_cap: int) -> dict:
    name = f"brute_force_cr_witness agrees (levels ≤ {level_cap}, size cap {size_cap})"
    try:
        found = any(fin.brute_force_cr_witness(R, n, size_cap) is not None for n in range(2, level_cap + 1))
    except ResourceLimitError as exc:
        return check(name, None, f"skipped: {exc}")
    if found and not expected:
        return check(name, False, "search found a witness")
    if not found and expected:
        return check(name, None, "no witness within the caps; longer levels may be needed")
    return check(name, True)


# -- interval relations ----------------------------------------------------


def _is_function_graph(R: IntervalRelation) -> bool:
    if R.verticals or R.horizontals or R.isolated or not R.branches:
        return False
    try:
        check_function_pieces(R.branches)
    except MalformedInputError:
        return False
    return True


def _analyze_interval(R: IntervalRelation, p, level_cap: int, timer) -> dict:
    try:
        F = as_f_union_g(R)
    except PreconditionError:
        F = None
    if F is not None:
        return _analyze_f_union_g(F, p, timer)
    if _is_function_graph(R):
        return _analyze_function_graph(R, timer)
    crosses = _cross_candidates(R)
    if crosses is not None:
        return _analyze_cross(R, *crosses, level_cap, timer)
    return {
        "kind": "interval",
        "verdicts": {
            "cr_turbulent": verdict(None, "undecided: no constructive procedure applies"),
            "reverse_cr_turbulent": verdict(None, "undecided: no constructive procedure applies"),
        },
        "witnesses": {},
        "checks": [],
    }


def _analyze_f_union_g(F: FUnionG, p, timer) -> dict:
    with timer("cr_witness_search"):
        w = cr_witness_search(F, p)
    with timer("reverse_cr_witness_search"):
        rw = reverse_cr_witness_search(F, p)
    by = "cr_witness_search: least verified N, K from [β, 1] through g, L from [γ, a] through f"
    return {
        "kind": "interval",
        "verdicts": {
            "cr_turbulent": verdict(True, by, level=w.level, N=w.params.N),
            "reverse_cr_turbulent": verdict(True, "reverse_cr_witness_search: " + by.split(": ", 1)[1] + ", on the inverse", level=rw.level, N=rw.params.N),
        },
        "witnesses": {"cr": w.to_json(), "reverse_cr": rw.to_json()},
        "checks": [
            check("verify_interval_cr_witness[cr]", check_interval_witness(F, w).verified),
            check("verify_interval_cr_witness[reverse_cr]", check_interval_witness(F, rw).verified),
            check("truncated cr witness fails", not check_interval_witness(F, w.truncated()).verified),
        ],
    }


def _dyadic_intervals(depth: int):
    step = Fraction(1, 2 ** depth)
    cells = [(k * step, (k + 1) * step) for k in range(2 ** depth)]
    return [IntervalUnion.of(c) for c in cells]


def _find_separated_pair(S: LegSystem, m_max: int = 3, depth: int = 3):
    """First separated ``m``-turbulent pair of closed dyadic cells."""
    cells = _dyadic_intervals(depth)
    for m in range(1, m_max + 1):
        for U, V in combinations(cells, 2):
            if U & V:
                continue
            K, L = LegSet(((0, U),)), LegSet(((0, V),))
            if verify_turbulent(S, K, L, m) is Turbulence.SEPARATED:
                return K, L, m
    return None


def _analyze_function_graph(R: IntervalRelation, timer) -> dict:
    S = LegSystem.single(R.branches)
    with timer("pair_search"):
        found = _find_separated_pair(S)
    witnesses, checks = {}, []
    if found is None:
        cr = verdict(None, "undecided: no separated pair among dyadic cells of width 1/8 for m ≤ 3")
    else:
        K, L, m = found
        w = function_to_graph_witness(S, K, L, m)
        witnesses["pair"] = pair_to_json(K, L, m)
        witnesses["cr"] = w.to_json()
        checks.append(check("verify_interval_cr_witness[cr]", check_interval_witness(R, w).verified))
        cr = verdict(True, "function_to_graph_witness: orbit tuples of a separated pair", level=w.level)
    return {
        "kind": "interval",
        "verdicts": {
            "cr_turbulent": cr,
            "reverse_cr_turbulent": verdict(False, "graph of a map: tuples are fixed by their first entry, so first projections of disjoint sets are disjoint"),
        },
        "witnesses": witnesses,
        "checks": checks,
    }


def _cross_candidates(R: IntervalRelation):
    full_v = [x for x, y0, y1 in R.verticals if (y0, y1) == (ZERO, ONE)]
    full_h = [y for x0, x1, y in R.horizontals if (x0, x1) == (ZERO, ONE)]
    if len(full_v) == 1 and len(full_h) == 1 and full_v[0] != full_h[0]:
        return full_v[0], full_h[0]
    return None


def _analyze_cross(R: IntervalRelation, a, b, level_cap: int, timer) -> dict:
    with timer("conditions"):
        fwd = non_turbulence_conditions_interval(R, a, b)
        rev = non_turbulence_conditions_interval(R.inverse(), b, a)
    checks = []
    with timer("discretized_search"):
        for name, rel in (("relation", R), ("inverse", R.inverse())):
            D = discretize(rel)
            try:
                hit = any(fin.brute_force_cr_witness(D, n, 1) is not None for n in range(2, max(level_cap, 2) + 1))
                checks.append(check(f"discretized {name}: no singleton witness at levels ≤ {level_cap}", not hit))
            except MahavierError as exc:
                checks.append(check(f"discretized {name}", None, f"skipped: {exc}"))
    by = "non_turbulence_conditions_interval with a = {a}, b = {b}"
    return {
        "kind": "interval",
        "verdicts": {
            "cr_turbulent": verdict(False if fwd else None, by.format(a=a, b=b) if fwd else "undecided: conditions fail"),
            "reverse_cr_turbulent": verdict(False if rev else None, by.format(a=b, b=a) + " on the inverse" if rev else "undecided: conditions fail"),
        },
        "witnesses": {},
        "checks": checks,
    }


# -- leg systems -----------------------------------------------------------


def leg0_tent_pair():
    half = Fraction(1, 2)
    return LegSet.on_leg(0, (ZERO, half)), LegSet.on_leg(0, (half, ONE))


def _analyze_legs(S: LegSystem, timer) -> dict:
    K, L = leg0_tent_pair()
    results = {}
    with timer("pair_classification"):
        for m in range(1, len(S.legs) + 1):
            results[f"m={m}"] = verify_turbulent(S, K, L, m).value
    turbulent = [m for m in range(1, len(S.legs) + 1) if results[f"m={m}"] != Turbulence.NEITHER.value]
    return {
        "kind": "legs",
        "verdicts": {
            "leg0_tent_pair": verdict(results, "verify_turbulent of K = [0, 1/2], L = [1/2, 1] on leg 0"),
            "least_turbulent_iterate": verdict(turbulent[0] if turbulent else None, "least m above with a turbulent classification"),
        },
        "witnesses": {"pair": pair_to_json(K, L, turbulent[0] if turbulent else 1)},
        "checks": [],
    }
