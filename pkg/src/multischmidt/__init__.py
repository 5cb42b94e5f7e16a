"""Multipartite Schmidt numbers, Schmidt coefficients, and generalized EoF.

The package classifies multipartite pure states by their finest product
factorization, assigns a generalized Schmidt number through a local-rank
recursion (with a convex-roof search for mixed reductions), constructs the
matching Schmidt coefficient multisets, and evaluates the generalized
entanglement of formation they induce.
"""
from .bipartite import (
    SchmidtDecomposition,
    entanglement_entropy,
    mixed_bipartite_schmidt_number,
    partial_transpose,
    ppt_decisive,
    ppt_entangled,
    schmidt_decompose,
)
from .coefficients import (
    CoefficientSet,
    EofBounds,
    generalized_eof,
    max_entropy_ensemble_element,
    mixed_generalized_eof,
    pure_schmidt_coefficients,
)
from .core import (
    DEFAULT_RANK_TOL,
    DensityMatrix,
    DimensionProfile,
    Eigensystem,
    PureState,
    SubsystemSet,
    entropy_bits,
    normalized_state,
    numerical_rank,
    reduce,
    scaled_root,
    spectrum,
)
from .errors import ConsistencyError, SearchError, UnsupportedStructureError
from .number import (
    DEFAULT_BUDGET,
    EnsembleCandidate,
    SchmidtNumberResult,
    SearchBudget,
    ensemble_search,
    mixed_schmidt_number,
    pure_schmidt_number,
    slocc_rank_check,
)
from .partitions import (
    FULLY_SEPARABLE,
    GENUINELY_ENTANGLED,
    PartitionStructure,
    enumerate_bipartitions,
    factorize,
    local_rank_vector,
)
from .states import (
    AcinParameters,
    acin_state,
    apply_local_operators,
    basis_state,
    bell_state,
    ghz_state,
    qubits,
    random_local_invertible,
    random_local_unitary,
    random_product,
    random_pure,
    w_state,
)

__all__ = [
    "AcinParameters",
    "CoefficientSet",
    "ConsistencyError",
    "DEFAULT_BUDGET",
    "DEFAULT_RANK_TOL",
    "DensityMatrix",
    "DimensionProfile",
    "Eigensystem",
    "EnsembleCandidate",
    "EofBounds",
    "FULLY_SEPARABLE",
    "GENUINELY_ENTANGLED",
    "PartitionStructure",
    "PureState",
    "SchmidtDecomposition",
    "SchmidtNumberResult",
    "SearchBudget",
    "SearchError",
    "SubsystemSet",
    "UnsupportedStructureError",
    "acin_state",
    "apply_local_operators",
    "basis_state",
    "bell_state",
    "ensemble_search",
    "entanglement_entropy",
    "entropy_bits",
    "enumerate_bipartitions",
    "factorize",
    "generalized_eof",
    "ghz_state",
    "local_rank_vector",
    "max_entropy_ensemble_element",
    "mixed_bipartite_schmidt_number",
    "mixed_generalized_eof",
    "mixed_schmidt_number",
    "normalized_state",
    "numerical_rank",
    "partial_transpose",
    "ppt_decisive",
    "ppt_entangled",
    "pure_schmidt_coefficients",
    "pure_schmidt_number",
    "qubits",
    "random_local_invertible",
    "random_local_unitary",
    "random_product",
    "random_pure",
    "reduce",
    "scaled_root",
    "schmidt_decompose",
    "slocc_rank_check",
    "spectrum",
    "w_state",
]
