"""Finite-dimensional operator algebras, weights, expectations and the
relative-entropy machinery built on them."""

from .algebras import (
    BlockStructure,
    MatrixBlockAlgebra,
    algebra_from_basis,
    build_algebra,
    commutant,
    commutant_basis_nullspace,
)
from .expectations import (
    ConditionalExpectationMap,
    NoPreservingExpectationError,
    compose_expectations,
    cyclic_group_unitaries,
    group_average_expectation,
    identity_expectation,
    state_preserving_expectation,
    symmetric_group_unitaries,
    trace_projection_superop,
    unvec_matrix,
    vec_matrix,
    weyl_unitaries,
)
from .identities import (
    ChainInstance,
    ChainReport,
    DifferenceInstance,
    DifferenceReport,
    IdentityCheckReport,
    check_entropy_identity,
    entropy_additivity_chain,
    entropy_difference_identity,
    random_chain_instance,
    random_difference_instance,
    random_unitary,
)
from .index import (
    DualWeightMap,
    PimsnerPopaReport,
    QuasiBasis,
    dual_weight,
    dual_weight_map,
    kosaki_index,
    pimsner_popa_check,
    quasi_basis,
)
from .spatial import (
    connes_cocycle,
    modular_flow,
    relative_entropy_spatial,
    relative_entropy_umegaki,
    spatial_derivative,
)
from .states import (
    VectorStateData,
    WeightDensity,
    canonical_density,
    random_faithful_state,
    trace_state,
    vector_state,
)

__all__ = [
    "BlockStructure",
    "MatrixBlockAlgebra",
    "algebra_from_basis",
    "build_algebra",
    "commutant",
    "commutant_basis_nullspace",
    "ConditionalExpectationMap",
    "NoPreservingExpectationError",
    "compose_expectations",
    "cyclic_group_unitaries",
    "group_average_expectation",
    "identity_expectation",
    "state_preserving_expectation",
    "symmetric_group_unitaries",
    "trace_projection_superop",
    "unvec_matrix",
    "vec_matrix",
    "weyl_unitaries",
    "ChainInstance",
    "ChainReport",
    "DifferenceInstance",
    "DifferenceReport",
    "IdentityCheckReport",
    "check_entropy_identity",
    "entropy_additivity_chain",
    "entropy_difference_identity",
    "random_chain_instance",
    "random_difference_instance",
    "random_unitary",
    "DualWeightMap",
    "PimsnerPopaReport",
    "QuasiBasis",
    "dual_weight",
    "dual_weight_map",
    "kosaki_index",
    "pimsner_popa_check",
    "quasi_basis",
    "connes_cocycle",
    "modular_flow",
    "relative_entropy_spatial",
    "relative_entropy_umegaki",
    "spatial_derivative",
    "VectorStateData",
    "WeightDensity",
    "canonical_density",
    "random_faithful_state",
    "trace_state",
    "vector_state",
]
