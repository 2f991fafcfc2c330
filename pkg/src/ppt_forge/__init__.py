"""Construction, reconstruction and numerical exploration of low-rank PPT states on C^nA (x) C^nB."""

from .dimension_census import CensusRow, census_table, dimension_bound, measure_dimension, subspace_set_dimension
from .geodesic_flow import (
    FlowConfig,
    Trajectory,
    boundary_seek,
    flow_state,
    integrate,
    pca_projection,
    plane_section_scan,
    random_tangent_state,
)
from .hermitian_core import (
    DEFAULT_TOL,
    BipartiteDims,
    Tolerances,
    is_ppt,
    partial_transpose,
    pseudoinverse,
    rank_pair,
    sl_product_transform,
)
from .perturbation import (
    PerturbationDirection,
    prepare_upb,
    rank45_direction,
    rank45_pipeline,
    rank45_seed,
    step_finite,
    tangent_fixed_image,
    tangent_rank_preserving,
)
from .product_vectors import (
    FinderConfig,
    Invariants,
    OrthParams,
    ProductVector,
    ProductVectorSet,
    StandardFormParams,
    classify_params,
    classify_region,
    find_products_in_subspace,
    invariants_from_dets,
    invariants_from_params,
    orth_params_from_invariants,
    orth_standard_vectors,
    product_vector_counts,
    sixth_product_vector,
    standard_form_vectors,
    to_standard_form,
)
from .state_construction import (
    constraint_census,
    reconstruct_from_kernel,
    search_low_rank_ppt,
    separable_rank4_fixture,
    separable_state,
    upb_state,
)
from .superop import HermBasis, SuperOperator, build_projectors, build_tilde_projectors, extremality_test, herm_basis

__version__ = "0.1.0"
