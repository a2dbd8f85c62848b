"""Finite-copy entanglement distillation through distillable subspaces."""

from .dss import (
    DSSRecord,
    ZeroPattern,
    combine_dss,
    find_dss,
    is_dss,
    maximal_dss_partition,
    theorem2_check,
)
from .errors import (
    DistillError,
    DomainError,
    InconsistencyError,
    NotEntangledError,
    PreconditionError,
    ResourceError,
    ValidationError,
)
from .linalg import EigenSystem, hermitian_eig, kron, svd
from .protocol import (
    LocalProjectorPartition,
    Protocol,
    ProtocolOutcome,
    YieldReport,
    apply_protocol,
    finite_copy_yield,
    synthesize_projectors,
)
from .qubit import (
    Classification,
    DistillableParameters,
    Verdict,
    WoottersSpectrum,
    classify_finite_distillable,
    is_inseparable,
    is_qss,
    product_vectors_in_span,
    spin_flip,
    wootters_spectrum,
)
from .schmidt import SchmidtDecomposition, entanglement_entropy, filter_to_maximally_entangled, schmidt_decompose
from .state import (
    BipartiteDensity,
    ProductSubspace,
    apply_local_unitaries,
    make_density,
    npt_check,
    partial_transpose,
    project_product_subspace,
    pure_decomposition,
    tensor_power,
)

__version__ = "0.1.0"
