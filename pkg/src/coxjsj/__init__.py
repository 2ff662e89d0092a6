"""JSJ quotient trees of right-angled Coxeter groups from their defining graphs."""

from .coxeter import (
    CayleyBall,
    build_ball,
    classify_side,
    growth_ball_size,
    normal_form,
    verify_a_set_separation,
    verify_separation,
)
from .enumerate import (
    ApproxPairOrbit,
    SimClassOrbit,
    SpecialSubgroup,
    StarOrbit,
    enumerate_a_sets,
    enumerate_approx_orbits,
    enumerate_sim_orbits,
    enumerate_star_orbits,
    is_approx_coincident,
    satisfies_a1,
    satisfies_a2,
    satisfies_b1,
)
from .errors import (
    AmbiguousNeighbour,
    CapExceeded,
    CoxJsjError,
    GraphError,
    OnSeparatingSet,
    ParseError,
    PreconditionError,
    SearchBudgetExceeded,
    TreeValidationError,
)
from .graph import (
    AssumptionReport,
    Branch,
    CutPairInfo,
    DefiningGraph,
    branches,
    check_standing_assumptions,
    components_after_removal,
    cut_pair_info,
    cut_pairs,
    cyclic_order,
    essential_vertices,
    is_cocompact_fuchsian,
    parse_graph,
    separates_realisation,
    splits_over_two_ended,
)
from .k4 import SubdividedK4, a2_violation, find_subdivided_k4
from .tree import (
    INF,
    ComparisonResult,
    QuotientTree,
    build_quotient_tree,
    compare_trees,
    export_tree,
    import_tree,
    is_class_g,
    stars_iff_k4_check,
    validate_tree,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousNeighbour",
    "ApproxPairOrbit",
    "AssumptionReport",
    "Branch",
    "CapExceeded",
    "CayleyBall",
    "ComparisonResult",
    "CoxJsjError",
    "CutPairInfo",
    "DefiningGraph",
    "GraphError",
    "INF",
    "OnSeparatingSet",
    "ParseError",
    "PreconditionError",
    "QuotientTree",
    "SearchBudgetExceeded",
    "SimClassOrbit",
    "SpecialSubgroup",
    "StarOrbit",
    "SubdividedK4",
    "TreeValidationError",
    "a2_violation",
    "branches",
    "build_ball",
    "build_quotient_tree",
    "check_standing_assumptions",
    "classify_side",
    "compare_trees",
    "components_after_removal",
    "cut_pair_info",
    "cut_pairs",
    "cyclic_order",
    "enumerate_a_sets",
    "enumerate_approx_orbits",
    "enumerate_sim_orbits",
    "enumerate_star_orbits",
    "essential_vertices",
    "export_tree",
    "find_subdivided_k4",
    "growth_ball_size",
    "import_tree",
    "is_approx_coincident",
    "is_class_g",
    "is_cocompact_fuchsian",
    "normal_form",
    "parse_graph",
    "satisfies_a1",
    "satisfies_a2",
    "satisfies_b1",
    "separates_realisation",
    "splits_over_two_ended",
    "stars_iff_k4_check",
    "validate_tree",
    "verify_a_set_separation",
    "verify_separation",
]
