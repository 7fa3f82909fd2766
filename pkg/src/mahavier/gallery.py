"""Named example relations with the verdicts the analysis must reproduce."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, NamedTuple

from .branch_pair import linear_pair
from .documents import round_floats
from .errors import MalformedInputError
from .finite import FiniteRelation
from .intervals import as_rational, format_rational
from .interval_relation import IntervalRelation, cantor_relation
from .transforms import nleg_system, tent_pieces

GOLDEN = math.log((1 + math.sqrt(5)) / 2)


class GalleryEntry(NamedTuple):
    name: str
    params: dict
    relation: object
    expected: dict
    source: str


def _tent(params) -> GalleryEntry:
    R = IntervalRelation(branches=tent_pieces())
    expected = {"cr_turbulent": True, "reverse_cr_turbulent": False}
    return GalleryEntry("tent", {}, R, expected, "tent map T(x) = 1 - |2x - 1| with a refined separated 2-pair")


def _nleg(params) -> GalleryEntry:
    n = int(params.get("n") or 5)
    S = nleg_system(n)
    classes = {f"m={m}": ("turbulent" if m == n else "neither") for m in range(1, n + 1)}
    expected = {"leg0_tent_pair": classes, "least_turbulent_iterate": n}
    return GalleryEntry("nleg", {"n": n}, S, expected, f"{n} legs: tent map on leg 0, identities around the cycle")


def _golden(params) -> GalleryEntry:
    R = FiniteRelation.from_edges([("0", "0"), ("0", "1"), ("1", "0")])
    expected = {"cr_turbulent": True, "reverse_cr_turbulent": True, "uncountable": True, "entropy": GOLDEN}
    return GalleryEntry("golden-mean", {}, R, expected, "golden-mean shift, entropy log of the golden ratio")


def _full2(params) -> GalleryEntry:
    R = FiniteRelation.from_edges([(s, t) for s in "01" for t in "01"])
    expected = {"cr_turbulent": True, "reverse_cr_turbulent": True, "uncountable": True, "entropy": math.log(2)}
    return GalleryEntry("full-2", {}, R, expected, "full relation on two points")


def _linear(params) -> GalleryEntry:
    a = as_rational(params.get("a") or "1/3")
    b = as_rational(params.get("b") or "2")
    R = linear_pair(a, b).as_plain()
    expected = {"cr_turbulent": True, "reverse_cr_turbulent": True}
    return GalleryEntry(
        "linear-pair",
        {"a": format_rational(a), "b": format_rational(b)},
        R,
        expected,
        "F_ab = {(x, ax)} ∪ {(x, bx) : x ≤ 1/b}, CR-turbulent and reverse CR-turbulent",
    )


def _cantor(params) -> GalleryEntry:
    depth = int(params.get("depth") or 3)
    a = as_rational(params.get("a") or "1/2")
    b = as_rational(params.get("b") or "5/6")
    perm = params.get("permutation") or "shift"
    R = cantor_relation(depth, a, b, perm)
    expected = {"cr_turbulent": False, "reverse_cr_turbulent": False}
    return GalleryEntry(
        "cantor",
        {"depth": depth, "a": format_rational(a), "b": format_rational(b), "permutation": perm},
        R,
        expected,
        "Cantor-set bijection with a vertical at a and a horizontal at b: neither CR-turbulent nor reverse",
    )


BUILDERS: dict[str, Callable[[dict], GalleryEntry]] = {
    "tent": _tent,
    "nleg": _nleg,
    "golden-mean": _golden,
    "full-2": _full2,
    "linear-pair": _linear,
    "cantor": _cantor,
}


def build(name: str, **params) -> GalleryEntry:
    if name not in BUILDERS:
        raise MalformedInputError(f"unknown gallery entry {name!r}; choose from {', '.join(BUILDERS)}")
    return BUILDERS[name](params)


def sidecar(entry: GalleryEntry) -> dict:
    return {"name": entry.name, "params": entry.params, "expected": entry.expected, "source": entry.source}


def reproduced(report: dict, expected: dict) -> dict[str, bool]:
    """Per expected key, whether the report's verdict value matches."""
    out = {}
    for key, want in expected.items():
        got = report["verdicts"].get(key, {}).get("value")
        out[key] = round_floats(got) == round_floats(want)
    return out

