"""Zigzag numbers of labeled arcs and the flip-count pigeonhole bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Sequence

from .errors import MalformedInputError, ResourceLimitError
from .intervals import as_rational, format_rational

LABELS = ("A", "B", "-")
FLIP_GUARD = 3


@dataclass(frozen=True)
class LabeledPath:
    """Samples ``t_1 < … < t_m`` of an arc with labels ``A``, ``B`` or ``-`` (neither)."""

    t: tuple[Fraction, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        t = tuple(as_rational(x) for x in self.t)
        labels = tuple(self.labels)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "labels", labels)
        if len(t) != len(labels):
            raise MalformedInputError("samples and labels differ in length")
        if any(a >= b for a, b in zip(t, t[1:])):
            raise MalformedInputError("sample parameters must be strictly increasing")
        bad = set(labels) - set(LABELS)
        if bad:
            raise MalformedInputError(f"unknown labels {sorted(bad)}")

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> "LabeledPath":
        return cls(tuple(Fraction(i) for i in range(len(labels))), tuple(labels))

    def delete(self, index: int) -> "LabeledPath":
        return LabeledPath(self.t[:index] + self.t[index + 1:], self.labels[:index] + self.labels[index + 1:])

    def to_json(self) -> dict:
        return {"t": [format_rational(x) for x in self.t], "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data) -> "LabeledPath":
        return cls(tuple(data["t"]), tuple(data["labels"]))


def zigzag_number(p: LabeledPath) -> int:
    """Longest subsequence with strictly alternating ``A``/``B`` labels.

    The greedy count of maximal runs among the ``A``/``B`` labels is optimal
    for either starting phase, so the maximum over phases is that count.
    """
    runs = 0
    last = None
    for lab in p.labels:
        if lab != "-" and lab != last:
            runs += 1
            last = lab
    return runs


def zigzag_number_brute(p: LabeledPath) -> int:
    """Exhaustive maximum over all subsequences; exponential, for testing."""
    labels = p.labels
    for size in range(len(labels), 0, -1):
        for idx in combinations(range(len(labels)), size):
            seq = [labels[i] for i in idx]
            if "-" in seq:
                continue
            if all(a != b for a, b in zip(seq, seq[1:])):
                return size
    return 0


def zigzag_bound(diameter, delta) -> int:
    """``⌈diameter / delta⌉``."""
    diameter, delta = as_rational(diameter), as_rational(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if diameter <= 0:
        raise ValueError("diameter must be positive")
    return math.ceil(diameter / delta)


@dataclass(frozen=True)
class FlipAssignment:
    """A bijection from ``{1, …, 2ⁿ}`` onto the cube ``{0, 1}ⁿ``, listed in order."""

    n: int
    psi: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        psi = tuple(tuple(v) for v in self.psi)
        object.__setattr__(self, "psi", psi)
        if self.n < 1:
            raise MalformedInputError("n must be positive")
        if sorted(psi) != sorted(product((0, 1), repeat=self.n)):
            raise MalformedInputError("assignment is not a bijection onto the cube")

    @classmethod
    def gray(cls, n: int) -> "FlipAssignment":
        codes = [i ^ (i >> 1) for i in range(2 ** n)]
        return cls(n, tuple(tuple((c >> (n - 1 - k)) & 1 for k in range(n)) for c in codes))


def flip_counts(F: FlipAssignment) -> tuple[int, ...]:
    """Per coordinate, the number of consecutive pairs whose entries differ."""
    return tuple(
        sum(1 for u, v in zip(F.psi, F.psi[1:]) if u[k] != v[k])
        for k in range(F.n)
    )


def flip_bound_verify(n: int, *, guard: int = FLIP_GUARD) -> bool:
    """Whether every bijection has a coordinate with at least ``(2ⁿ - 1)/n`` flips.

    Exhaustive over all ``(2ⁿ)!`` orderings of the cube.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > guard:
        raise ResourceLimitError(f"n = {n} needs {math.factorial(2 ** n)} bijections (guard n ≤ {guard})")
    cube = list(product((0, 1), repeat=n))
    need = Fraction(2 ** n - 1, n)
    for order in permutations(cube):
        counts = [0] * n
        for u, v in zip(order, order[1:]):
            for k in range(n):
                if u[k] != v[k]:
                    counts[k] += 1
        if max(counts) < need:
            return False
    return True
