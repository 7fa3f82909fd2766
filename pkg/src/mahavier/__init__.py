"""Dynamics of closed relations: Mahavier products, entropy and turbulence witnesses."""

from .branch_pair import (
    CoveringParams,
    FUnionG,
    IntervalWitness,
    SetSpec,
    as_f_union_g,
    check_interval_witness,
    construct_f_union_g,
    covering_parameters,
    cr_witness_search,
    linear_pair,
    reverse_cr_witness_search,
    verify_interval_cr_witness,
)
from .errors import (
    InputFormatError,
    MahavierError,
    MalformedInputError,
    MalformedWitnessError,
    PreconditionError,
    ResourceLimitError,
    TheoremInapplicableError,
    UnsupportedInputError,
    WitnessSearchError,
)
from .finite import (
    EntropyEstimate,
    FiniteRelation,
    LevelWitness,
    TurbulenceResult,
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
from .intervals import IntervalUnion, as_rational, format_rational
from .interval_relation import (
    IntervalRelation,
    cantor_points,
    cantor_relation,
    discretize,
    iterate_image,
    non_turbulence_conditions_interval,
    periodic_itineraries,
)
from .plmaps import PLBranch
from .transforms import (
    FiniteSystem,
    LegMap,
    LegSet,
    LegSystem,
    Turbulence,
    chain_check,
    function_to_graph_witness,
    graph_to_function_witness,
    nleg_system,
    refine_pair,
    star_lift,
    tent_system,
    verify_turbulent,
)
from .zigzag import FlipAssignment, LabeledPath, flip_bound_verify, flip_counts, zigzag_bound, zigzag_number

__version__ = "0.1.0"
