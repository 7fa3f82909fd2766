import random
from fractions import Fraction as Q
from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from conftest import finite_relations
from mahavier import (
    FiniteRelation,
    FiniteSystem,
    IntervalRelation,
    IntervalUnion,
    LegSet,
    LevelWitness,
    MalformedInputError,
    PLBranch,
    PreconditionError,
    TheoremInapplicableError,
    Turbulence,
    brute_force_cr_witness,
    chain_check,
    check_interval_witness,
    discretize,
    function_to_graph_witness,
    graph_to_function_witness,
    is_cr_turbulent,
    nleg_system,
    refine_pair,
    star_lift,
    tent_system,
    verify_cr_witness,
    verify_turbulent,
)
from mahavier.transforms import LegSystem, iterate, tent_pieces

T = tent_system()
HALF = Q(1, 2)


def leg0(*intervals):
    return LegSet.on_leg(0, *intervals)


def subsets(ids):
    ids = list(ids)
    for k in range(1, len(ids) + 1):
        yield from (frozenset(c) for c in combinations(ids, k))


def all_maps(k):
    for targets in product(range(k), repeat=k):
        yield FiniteSystem.from_map(dict(enumerate(targets)))


# a map that runs 0 -> 1 -> 0 -> 1 over thirds of [0, 1]
ZIGZAG = LegSystem.single(
    (
        PLBranch((0, Q(1, 3)), (0, 1)),
        PLBranch((Q(1, 3), Q(2, 3)), (1, 0)),
        PLBranch((Q(2, 3), 1), (0, 1)),
    )
)


# -- classification --------------------------------------------------------


def test_tent_classifications():
    assert verify_turbulent(T, leg0((0, HALF)), leg0((HALF, 1)), 1) is Turbulence.TURBULENT
    assert verify_turbulent(T, leg0((0, Q(1, 4))), leg0((HALF, Q(3, 4))), 2) is Turbulence.SEPARATED
    assert verify_turbulent(T, leg0((0, 1)), leg0((0, 1)), 1) is Turbulence.NEITHER


def test_classification_needs_nonempty_sets():
    with pytest.raises(MalformedInputError):
        verify_turbulent(T, LegSet(), leg0((0, 1)))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_finite_maps_never_separate(k):
    # |f^m(K)| ≤ |K| forces K ∪ L ⊆ f^m(K) to fail unless K = L = f^m(K)
    for S in all_maps(k):
        for K, L in product(subsets(range(k)), repeat=2):
            for m in (1, 2, 3):
                res = verify_turbulent(S, K, L, m)
                assert res is not Turbulence.SEPARATED
                if res is Turbulence.TURBULENT:
                    assert K == L and len(K) == 1
                    assert iterate(S, K, m) == K


def test_finite_system_requires_map():
    with pytest.raises(MalformedInputError):
        FiniteSystem(FiniteRelation.full(2))


# -- image chains ----------------------------------------------------------


def test_chain_examples():
    K0, K1 = leg0((0, Q(1, 4))), leg0((HALF, Q(3, 4)))
    for word in product((0, 1), repeat=5):
        assert chain_check(T, K0, K1, word, 4, m=2)
    cycle = FiniteSystem.from_map({0: 1, 1: 0})
    assert not chain_check(cycle, {0}, {1}, (0, 0), 1)
    assert chain_check(cycle, {0}, {1}, (), 0)


def test_chain_depth_six_for_separated_pairs():
    rng = random.Random(3)
    cells = [leg0((Q(k, 8), Q(k + 1, 8))) for k in range(8)]
    checked = 0
    for m in (1, 2, 3):
        for U, V in combinations(cells, 2):
            if U & V or verify_turbulent(T, U, V, m) is not Turbulence.SEPARATED:
                continue
            checked += 1
            for _ in range(16):
                word = tuple(rng.randint(0, 1) for _ in range(7))
                assert chain_check(T, U, V, word, 6, m=m)
    assert checked == 22


# -- graph and function witnesses ------------------------------------------


def test_tent_pair_to_level3_witness():
    K, L = leg0((0, Q(1, 4))), leg0((HALF, Q(3, 4)))
    w = function_to_graph_witness(T, K, L, 2)
    assert w.level == 3
    assert check_interval_witness(T.graph(), w).verified


def test_function_witness_needs_separated_pair():
    with pytest.raises(PreconditionError):
        function_to_graph_witness(T, leg0((0, HALF)), leg0((HALF, 1)), 1)


def test_finite_graph_witnesses_are_impossible():
    # the graph of a finite map is never cr-turbulent, so no witness reaches the extraction
    for k in (1, 2, 3):
        for S in all_maps(k):
            assert not is_cr_turbulent(S.graph()).verdict
    perm = FiniteSystem.from_map({0: 1, 1: 0})
    w = LevelWitness(2, frozenset([(0, 1)]), frozenset([(1, 0)]))
    with pytest.raises(PreconditionError):
        graph_to_function_witness(perm, w)


def test_tent_graph_discretized_has_no_witness():
    D = discretize(IntervalRelation(branches=tent_pieces()), [Q(k, 8) for k in range(9)])
    S = FiniteSystem(D)
    for n in range(2, 6):
        assert brute_force_cr_witness(S.graph(), n, 1) is None


@given(st.integers(0, 7), st.integers(0, 7), st.integers(1, 3))
def test_round_trip_recovers_larger_pair(i, j, m):
    K, L = leg0((Q(i, 8), Q(i + 1, 8))), leg0((Q(j, 8), Q(j + 1, 8)))
    if K & L or verify_turbulent(T, K, L, m) is not Turbulence.SEPARATED:
        return
    w = function_to_graph_witness(T, K, L, m)
    K0, L0, m0 = graph_to_function_witness(T, w)
    assert m0 == m
    assert K <= K0 and L <= L0
    assert verify_turbulent(T, K0, L0, m) is Turbulence.SEPARATED


# -- star lift -------------------------------------------------------------


def test_star_lift_full2():
    F = FiniteRelation.full(2)
    w = star_lift(F, {(0, 0), (1, 0)}, {(0, 1), (1, 1)})
    assert w.kind == "reverse-cr" and w.level == 3
    assert w.K == {(0, 0, 0), (1, 0, 0)}
    assert w.L == {(0, 1, 1), (1, 1, 1)}
    assert verify_cr_witness(F, w)


def test_star_lift_errors():
    F = FiniteRelation.full(2)
    with pytest.raises(PreconditionError) as err:
        star_lift(F, {(0, 0)}, {(0, 1), (1, 1)})
    assert err.value.name == "pi1-not-onto"
    with pytest.raises(PreconditionError) as err:
        star_lift(F, F.edges, F.edges)
    assert "meet-projections-intersect" in err.value.names
    with pytest.raises(PreconditionError) as err:
        star_lift(FiniteRelation.from_edges([(0, 0), (1, 1)]), {(0, 1), (1, 1)}, {(0, 0), (1, 0)})
    assert "not-a-subrelation" in err.value.names


def test_star_lift_interval():
    # x -> x/2 and x -> (x + 1)/2 both cover [0, 1] and never agree
    lo, hi = PLBranch((0, 1), (0, HALF)), PLBranch((0, 1), (HALF, 1))
    F = IntervalRelation.from_branches(lo, hi)
    w = star_lift(F, IntervalRelation.from_branches(lo), IntervalRelation.from_branches(hi))
    assert check_interval_witness(F, w).verified


@given(finite_relations(max_points=3), st.data())
def test_star_lift_projects_onto_carrier(F, data):
    edges = sorted(F.edges)
    K = frozenset(data.draw(st.sets(st.sampled_from(edges))) if edges else ())
    L = frozenset(data.draw(st.sets(st.sampled_from(edges))) if edges else ())
    try:
        w = star_lift(F, K, L)
    except PreconditionError:
        return
    assert {t[0] for t in w.K} == set(F.ids) == {t[0] for t in w.L}
    assert verify_cr_witness(F, w)


# -- refinement ------------------------------------------------------------


def test_refine_tent():
    K0, K1 = refine_pair(T, leg0((0, HALF)), leg0((HALF, 1)), (0, HALF))
    assert K0 == leg0((0, Q(1, 4)))
    assert K1 == leg0((HALF, Q(3, 4)))
    assert T.image(K0) == leg0((0, HALF))
    assert T.image(K1) == leg0((HALF, 1))


def test_refine_zigzag_map():
    A, B = leg0((0, Q(1, 3))), leg0((Q(1, 3), Q(2, 3)))
    K0, K1 = refine_pair(ZIGZAG, A, B, (0, Q(1, 3)))
    assert K0 == leg0((0, Q(1, 9)))
    assert K1 == leg0((Q(4, 9), Q(5, 9)))
    assert ZIGZAG.image(K0) == A and ZIGZAG.image(K1) == B


def test_refine_rejects_fixed_junction():
    # both halves cover [0, 1] but f(1/2) = 1/2
    S = LegSystem.single(
        (
            PLBranch((0, Q(1, 4)), (0, 1)),
            PLBranch((Q(1, 4), HALF), (1, HALF)),
            PLBranch((HALF, Q(3, 4)), (HALF, 0)),
            PLBranch((Q(3, 4), 1), (0, 1)),
        )
    )
    with pytest.raises(TheoremInapplicableError) as err:
        refine_pair(S, leg0((0, HALF)), leg0((HALF, 1)), (0, HALF))
    assert err.value.name == "junction-fixed"
    F = FiniteSystem.from_map({0: 0})
    with pytest.raises(TheoremInapplicableError) as err:
        refine_pair(F, {0}, {0}, 0)
    assert err.value.name == "junction-fixed"


def test_refine_rejects_wrong_meet():
    with pytest.raises(PreconditionError) as err:
        refine_pair(T, leg0((0, HALF)), leg0((Q(1, 4), 1)), (0, HALF))
    assert err.value.name == "meet-not-junction"


def test_refine_finite_tent_analogue_is_not_turbulent():
    # doubling-and-folding on 8 points; no finite pair meeting in one point is turbulent
    fold = {i: (2 * i if i < 4 else 2 * (7 - i) + 1) for i in range(8)}
    S = FiniteSystem.from_map(fold)
    with pytest.raises(PreconditionError) as err:
        refine_pair(S, {0, 1, 2, 3}, {3, 4, 5, 6, 7}, 3)
    assert err.value.name == "pair-not-turbulent"


# -- leg systems -----------------------------------------------------------


def test_nleg_single_is_tent():
    S = nleg_system(1)
    assert S.legs[0].target == 0
    assert verify_turbulent(S, leg0((0, HALF)), leg0((HALF, 1)), 1) is Turbulence.TURBULENT


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_nleg_turbulent_only_at_n(n):
    S = nleg_system(n)
    K, L = leg0((0, HALF)), leg0((HALF, 1))
    assert verify_turbulent(S, K, L, n) is Turbulence.TURBULENT
    for m in range(1, n):
        assert verify_turbulent(S, K, L, m) is Turbulence.NEITHER


def test_nleg_images_walk_the_legs():
    S = nleg_system(5)
    K = leg0((0, HALF))
    assert iterate(S, K, 1) == LegSet.on_leg(1, (0, 1))
    assert iterate(S, K, 2) == LegSet.on_leg(2, (0, 1))
    assert S((0, Q(1, 4))) == (1, HALF)


def test_leg_set_algebra():
    A = LegSet.of({0: [(0, HALF)], 2: [(0, 1)]})
    B = LegSet.on_leg(0, (Q(1, 4), 1))
    assert (A & B) == leg0((Q(1, 4), HALF))
    assert (A | B).get(0) == IntervalUnion.unit()
    assert A.legs() == (0, 2)
    assert LegSet.on_leg(1, (HALF, HALF)).at_most_one_point()
