"""Orthogonal k-tuples, hyperplane discrepancy and orthogonality-free sets in F_q^d."""

from .constructions import (
    ConstructionReport,
    construct_2d,
    construct_E1,
    construct_E2,
    construct_product,
    embed_zero_coordinate,
)
from .counting import (
    BudgetExceeded,
    MainTerms,
    OrthAdjacency,
    TupleCensus,
    bridge_sum,
    count_tuples_bruteforce,
    count_tuples_graph,
    decompose_main_terms,
    expected_count,
    export_graph,
    threshold_size,
)
from .discrepancy import (
    L2Report,
    ScaledDiscrepancy,
    discrepancy_charsum,
    discrepancy_direct,
    l2_bruteforce,
    l2_closed_form,
    l2_report,
    lemma_bound_check,
    subset_expansion_check,
)
from .experiments import ExperimentConfig, SplitMix64, run_suite, sample_set, theorem_check
from .ffield import (
    FieldElement,
    FieldSpec,
    MultiplicativeSubgroup,
    cyclic_subgroup,
    field_for_order,
    field_make,
    find_generator,
    has_element_of_order_4,
    sqrt_minus_one,
)
from .geometry import (
    FVector,
    PointSet,
    ProjectiveLine,
    dot,
    hyperplane_members,
    is_isotropic,
    lines_through_origin,
    perp_line,
    subfield_circle,
    subfield_sphere,
)

__version__ = "0.1.0"
