import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_relations, finite_relations
from mahavier import (
    FiniteRelation,
    LevelWitness,
    MalformedInputError,
    MalformedWitnessError,
    PreconditionError,
    ResourceLimitError,
    brute_force_cr_witness,
    double_loop_witness,
    entropy,
    entropy_growth,
    is_cr_turbulent,
    is_reverse_cr_turbulent,
    is_uncountable,
    itinerary_realization,
    mahavier_level,
    non_turbulence_conditions,
    shift_tuple,
    verify_cr_witness,
)
from mahavier.finite import forward_trim, inverse, walk_count

FULL2 = FiniteRelation.full(2)
GOLDEN = FiniteRelation.from_edges([(0, 0), (0, 1), (1, 0)])
TWO_CYCLE = FiniteRelation.from_edges([(0, 1), (1, 0)])
THREE_CYCLE = FiniteRelation.from_edges([(0, 1), (1, 2), (2, 0)])
EMPTY = FiniteRelation.from_edges([], points=[0, 1])


def brute_walks(R, n):
    return sorted(t for t in product(R.ids, repeat=n) if all((a, b) in R.edges for a, b in zip(t, t[1:])))


# -- data model ------------------------------------------------------------


def test_rejects_duplicate_ids_and_bad_coords():
    with pytest.raises(MalformedInputError):
        FiniteRelation((("a", (0.0,)), ("a", (1.0,))), frozenset())
    with pytest.raises(MalformedInputError):
        FiniteRelation((("a", (0.0,)), ("b", (1.0, 2.0))), frozenset())
    with pytest.raises(MalformedInputError):
        FiniteRelation((("a", (float("nan"),)),), frozenset())
    with pytest.raises(MalformedInputError):
        FiniteRelation((("a", (0.0,)),), frozenset([("a", "z")]))


@pytest.mark.parametrize(
    "R, n, expected",
    [
        (TWO_CYCLE, 3, [(0, 1, 0), (1, 0, 1)]),
        (GOLDEN, 3, [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 0, 1)]),
        (FULL2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]),
    ],
)
def test_mahavier_level_examples(R, n, expected):
    assert list(mahavier_level(R, n)) == expected


def test_shift_tuple():
    assert shift_tuple((0, 1, 0)) == (1, 0)
    assert shift_tuple(("a", "a", "a")) == ("a", "a")
    assert shift_tuple(shift_tuple((0, 0, 1))) == (1,)
    with pytest.raises(ValueError):
        shift_tuple((1,))


def test_inverse_examples():
    R = FiniteRelation.from_edges([(0, 1)])
    assert inverse(R).edges == frozenset([(1, 0)])
    assert inverse(FULL2) == FULL2


@given(finite_relations(), st.integers(1, 5))
def test_level_matches_enumeration(R, n):
    level = mahavier_level(R, n)
    assert list(level) == brute_walks(R, n)
    assert walk_count(R, n) == len(level)


@given(finite_relations(), st.integers(1, 5))
def test_inverse_involution_reverses_levels(R, n):
    assert inverse(inverse(R)) == R
    assert sorted(mahavier_level(inverse(R), n)) == sorted(t[::-1] for t in mahavier_level(R, n))


@given(finite_relations())
def test_forward_trim_keeps_infinite_starts(R):
    T = forward_trim(R)
    k = len(R.ids)
    # a point starts an infinite walk iff it starts a walk with k + 1 entries
    starts = {t[0] for t in brute_walks(R, k + 1)} if k else set()
    assert set(T.ids) == starts


# -- entropy ---------------------------------------------------------------


@pytest.mark.parametrize(
    "R, value",
    [(FULL2, math.log(2)), (GOLDEN, math.log((1 + math.sqrt(5)) / 2)), (THREE_CYCLE, 0.0), (EMPTY, 0.0)],
)
def test_entropy_examples(R, value):
    assert entropy(R).value == pytest.approx(value, abs=1e-9)
    assert entropy(R).method == "spectral"


def test_growth_full2_closed_form():
    samples = entropy_growth(FULL2, 10).samples
    assert [m for m, _ in samples] == list(range(1, 11))
    for m, v in samples:
        assert v == pytest.approx(math.log(2 ** (m + 1)) / m, rel=1e-12)
    assert entropy_growth(FULL2, 10).value == pytest.approx(1.1 * math.log(2), rel=1e-12)


def test_growth_two_cycle():
    for m, v in entropy_growth(TWO_CYCLE, 25).samples:
        assert v == pytest.approx(math.log(2) / m, rel=1e-12)


def test_growth_golden_mean():
    # |X^30| = F(33) = 3524578
    assert entropy_growth(GOLDEN, 30).value == pytest.approx(math.log(3524578) / 30, rel=1e-12)
    assert abs(entropy_growth(GOLDEN, 30).value - 0.481212) < 0.05


def test_growth_needs_two_samples():
    with pytest.raises(ValueError):
        entropy_growth(FULL2, 1)


def oracle_entropy(R):
    index = {v: i for i, v in enumerate(R.ids)}
    A = np.zeros((len(index), len(index)))
    for s, t in R.edges:
        A[index[s], index[t]] = 1
    rho = max(abs(np.linalg.eigvals(A))) if R.edges else 0.0
    return 0.0 if rho < 1 + 1e-6 else math.log(rho)


@given(finite_relations(max_points=5))
def test_entropy_matches_untrimmed_spectrum(R):
    assert entropy(R).value == pytest.approx(oracle_entropy(R), abs=1e-9)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_growth_tracks_entropy_exhaustive(k):
    for R in all_relations(k):
        s = entropy(R).value
        if s > 0:
            assert abs(entropy_growth(R, 40).value - s) <= 0.05, R


def test_growth_tolerance_needs_longer_walks_on_four_points():
    # a 4-point relation whose walk-count prefactor keeps m_max = 40 outside 0.05
    R = FiniteRelation.from_edges([(0, 2), (1, 0), (1, 2), (1, 3), (2, 0), (3, 0), (3, 1), (3, 2)])
    s = entropy(R).value
    assert abs(entropy_growth(R, 40).value - s) > 0.05
    assert abs(entropy_growth(R, 400).value - s) <= 0.05


@settings(max_examples=40)
@given(finite_relations(max_points=4, min_points=4))
def test_growth_tracks_entropy_four_points_long(R):
    s = entropy(R).value
    if s > 0:
        assert abs(entropy_growth(R, 400).value - s) <= 0.05


# -- double loops and turbulence -------------------------------------------


def test_double_loop_examples():
    assert double_loop_witness(FULL2) == ((0, 0, 0), (0, 1, 0), 2)
    assert double_loop_witness(GOLDEN) == ((0, 0, 0), (0, 1, 0), 2)
    assert double_loop_witness(TWO_CYCLE) is None


def test_cr_examples():
    res = is_cr_turbulent(FULL2)
    assert res.verdict
    assert res.witness.K == {(0, 0, 0, 1, 0)}
    assert res.witness.L == {(0, 1, 0, 0, 0)}
    assert not is_cr_turbulent(TWO_CYCLE).verdict
    injection = FiniteRelation.from_edges([(0, 1), (1, 2)])
    assert not is_cr_turbulent(injection).verdict


def test_reverse_cr_examples():
    assert is_reverse_cr_turbulent(FULL2).verdict
    R = FiniteRelation.from_edges([(0, 1), (1, 1)])
    assert is_reverse_cr_turbulent(R).verdict == is_cr_turbulent(inverse(R)).verdict
    assert not is_reverse_cr_turbulent(THREE_CYCLE).verdict


def test_uncountable_examples():
    assert is_uncountable(FULL2)
    assert not is_uncountable(TWO_CYCLE)
    assert not is_uncountable(EMPTY)


def test_verify_examples():
    w = LevelWitness(5, frozenset([(0, 0, 0, 1, 0)]), frozenset([(0, 1, 0, 0, 0)]))
    assert verify_cr_witness(FULL2, w)
    assert not verify_cr_witness(TWO_CYCLE, LevelWitness(2, frozenset([(0, 1)]), frozenset([(1, 0)])))
    with pytest.raises(MalformedWitnessError):
        LevelWitness(2, frozenset([(0, 1)]), frozenset([(0, 1)]))
    with pytest.raises(MalformedWitnessError):
        verify_cr_witness(TWO_CYCLE, LevelWitness(2, frozenset([(0, 0)]), frozenset([(1, 0)])))


@given(finite_relations())
def test_equivalence(R):
    res = is_cr_turbulent(R)
    assert res.verdict == (entropy(R).value > 0) == (double_loop_witness(R) is not None) == is_uncountable(R)


@given(finite_relations())
def test_returned_witnesses_verify(R):
    for res in (is_cr_turbulent(R), is_reverse_cr_turbulent(R)):
        if res.witness is not None:
            assert verify_cr_witness(R, res.witness)
    for n in range(2, 5):
        w = brute_force_cr_witness(R, n, 1)
        if w is not None:
            assert verify_cr_witness(R, w)


@given(finite_relations())
def test_entropy_lower_bound(R):
    res = is_cr_turbulent(R)
    if res.verdict:
        assert entropy(R).value >= math.log(2) / (res.witness.level - 1) - 1e-12


# -- brute force -----------------------------------------------------------


def test_brute_force_examples():
    w = brute_force_cr_witness(FULL2, 5, 1)
    assert w.K == {(0, 0, 0, 0, 0)} and w.L == {(0, 0, 0, 1, 0)}
    for n in range(1, 7):
        for cap in (1, 2):
            assert brute_force_cr_witness(TWO_CYCLE, n, cap) is None
            assert brute_force_cr_witness(EMPTY, n, cap) is None


def test_brute_force_guard():
    with pytest.raises(ResourceLimitError):
        brute_force_cr_witness(FiniteRelation.full(3), 12, 2)


@given(finite_relations(max_points=3), st.integers(2, 6))
def test_singleton_route_matches_enumeration(R, n):
    closed = [t for t in brute_walks(R, n) if t[0] == t[-1]]
    by_point = {v: sum(1 for t in closed if t[0] == v) for v in R.ids}
    w = brute_force_cr_witness(R, n, 1)
    assert (w is not None) == any(c >= 2 for c in by_point.values())
    if w is not None:
        assert min(w.K | w.L) in closed


@given(finite_relations(max_points=2), st.integers(2, 4))
def test_subset_route_contains_singletons(R, n):
    if brute_force_cr_witness(R, n, 1) is not None:
        assert brute_force_cr_witness(R, n, 2) is not None


# -- itineraries -----------------------------------------------------------


def test_itinerary_examples():
    w = is_cr_turbulent(FULL2).witness
    assert itinerary_realization(FULL2, w, (0,)) in w.K
    t = itinerary_realization(FULL2, w, (0, 1))
    assert t[:5] in w.K and t[4:] in w.L
    assert t == (0, 0, 0, 1, 0, 1, 0, 0, 0)


def test_itinerary_needs_verified_cr_witness():
    with pytest.raises(PreconditionError):
        itinerary_realization(FULL2, is_reverse_cr_turbulent(FULL2).witness, (0,))
    bad = LevelWitness(2, frozenset([(0, 1)]), frozenset([(1, 0)]))
    with pytest.raises(PreconditionError):
        itinerary_realization(TWO_CYCLE, bad, (0,))


@given(finite_relations(max_points=3), st.integers(1, 6))
def test_itineraries_distinct(R, j):
    res = is_cr_turbulent(R)
    if not res.verdict:
        return
    outs = {itinerary_realization(R, res.witness, w) for w in product((0, 1), repeat=j)}
    assert len(outs) == 2 ** j
    assert all(R.is_walk(t) for t in outs)


# -- non-turbulence conditions ---------------------------------------------


def cross_shape(k):
    # a partial injection on 0..k-1 plus a -> everything and everything -> b
    a, b = "a", "b"
    edges = [(str(i), str(i + 1)) for i in range(k - 1)]
    pts = [str(i) for i in range(k)] + [a, b]
    edges += [(a, x) for x in pts] + [(x, b) for x in pts]
    return FiniteRelation.from_edges(edges, points=pts), a, b


def test_conditions_examples():
    R, a, b = cross_shape(3)
    assert non_turbulence_conditions(R, a, b)
    assert not non_turbulence_conditions(FiniteRelation.full(3), 0, 1)
    loops = FiniteRelation.from_edges([(0, 0), (1, 2), (3, 3)])
    assert non_turbulence_conditions(loops, 0, 3)
    with pytest.raises(PreconditionError):
        non_turbulence_conditions(FULL2, 0, 0)


@pytest.mark.parametrize("k", [2, 3])
def test_conditions_imply_no_witness_exhaustive(k):
    for R in all_relations(k):
        for a, b in product(R.ids, repeat=2):
            if a != b and non_turbulence_conditions(R, a, b):
                assert not is_cr_turbulent(R).verdict
                for n in range(2, 6):
                    assert brute_force_cr_witness(R, n, 1) is None
                assert brute_force_cr_witness(R, 3, 2) is None


def test_conditions_imply_no_witness_cross_shape():
    R, a, b = cross_shape(4)
    assert non_turbulence_conditions(R, a, b)
    assert not is_cr_turbulent(R).verdict
    for n in range(2, 7):
        assert brute_force_cr_witness(R, n, 1) is None
