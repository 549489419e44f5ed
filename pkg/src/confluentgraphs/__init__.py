"""Desk-scale combinatorics of finite reflexive graphs with confluent
epimorphisms: classification, amalgamation, the named witness constructions,
cycle wrapping theory, and bounded inverse-sequence prefixes."""

from .errors import BudgetExceededError, InvariantViolationError, NoAmalgamError
from .graphs import (
    CycleDivision,
    Graph,
    OrientedCycle,
    arc_order,
    complete_graph,
    components,
    connected_subsets,
    cycle_graph,
    find_cycle_division,
    induced,
    induced_cycles,
    is_adjacently_disconnecting,
    is_arc,
    is_connected,
    is_connected_set,
    is_cycle_division,
    is_hereditarily_unicoherent,
    path_graph,
    point_graph,
    star_graph,
    to_dot,
)
from .morphisms import (
    Classification,
    Morphism,
    classify,
    confluent_by_definition,
    constant,
    enumerate_confluent_epis,
    identity,
    is_confluent_epi,
    is_monotone_epi,
    lift_arc,
    lift_cycle,
    restrict,
)
from .amalgamation import (
    AmalgamResult,
    common_refinement,
    connected_amalgam,
    standard_amalgam,
    verify_amalgamation,
)
from .constructions import (
    UnfoldingResult,
    attach_cycle_vertex,
    delta_double,
    double_cycle,
    extend_confluent,
    indecomposability_witness,
    kernel_component,
    split_edge,
    two_edge_lift_witnesses,
    two_pass_violations_exhaustive,
    two_pass_violations_pruned,
    unfold,
    unicoherence_witness,
    wrap_copies,
)
from .cycles import (
    WitnessPair,
    compose_witness,
    cycle_amalgam,
    find_confluent_witness,
    is_almost_wrapping,
    is_cycle_graph,
    oriented_arc,
    standard_wrap,
    winding_number,
)
from .sequences import (
    InverseSequence,
    build_fraisse_prefix,
    check_sharp,
    is_almost_graph_solenoid_prefix,
    thread_fibers,
    verify_fraisse_prefix,
)

__version__ = "0.1.0"
