"""Path-complete Lyapunov inequality graphs for switched linear systems.

Decide whether a set of Lyapunov inequalities is a valid stability
criterion, and when it is not, build an unstable matrix family together
with certificates that satisfy the inequalities anyway.
"""

__version__ = "0.1.0"

from .errors import (
    AsymmetricMatrixError,
    CycleError,
    DimensionError,
    GraphError,
    GraphIsPathCompleteError,
    InvalidWordError,
    NegativeEntryError,
    PathCompleteError,
    ResourceLimitError,
    SchemaError,
)
from .graphs import (
    Edge,
    LabeledGraph,
    Nfa,
    PathCompletenessVerdict,
    brute_force_path_complete,
    check_path_complete,
    expand_labels,
    inequalities_to_graph,
    mirror,
    nfa_universal,
    reduce_universality,
)
from .jsr import (
    JsrBounds,
    conic_scaling_bound,
    jsr_bounds,
    jsr_lower_bound,
    jsr_upper_bound,
    scale_set,
)
from .linalg import (
    Matrix,
    MatrixSet,
    Vector,
    is_positive_definite,
    mat_mul,
    mat_vec,
    spectral_radius_estimate,
)
from .synth import (
    AuxiliaryGraph,
    ConicCertificate,
    EllipsoidalCertificate,
    build_auxiliary_graph,
    build_sigma_w,
    cycle_product_radius,
    particular_case_check,
    subproduct_containment_check,
    synthesize_conic,
    synthesize_ellipsoidal,
    synthesize_ellipsoidal_direct,
    topological_numbering,
)
from .verify import (
    InequalityCheckReport,
    check_conic_inequality,
    check_ellipsoidal_inequality,
    conic_value,
    verify_certificate,
    verify_common_quadratic,
)

__all__ = [
    "AsymmetricMatrixError",
    "AuxiliaryGraph",
    "ConicCertificate",
    "CycleError",
    "DimensionError",
    "Edge",
    "EllipsoidalCertificate",
    "GraphError",
    "GraphIsPathCompleteError",
    "InequalityCheckReport",
    "InvalidWordError",
    "JsrBounds",
    "LabeledGraph",
    "Matrix",
    "MatrixSet",
    "NegativeEntryError",
    "Nfa",
    "PathCompleteError",
    "PathCompletenessVerdict",
    "ResourceLimitError",
    "SchemaError",
    "Vector",
    "brute_force_path_complete",
    "build_auxiliary_graph",
    "build_sigma_w",
    "check_conic_inequality",
    "check_ellipsoidal_inequality",
    "check_path_complete",
    "conic_scaling_bound",
    "conic_value",
    "cycle_product_radius",
    "expand_labels",
    "inequalities_to_graph",
    "is_positive_definite",
    "jsr_bounds",
    "jsr_lower_bound",
    "jsr_upper_bound",
    "mat_mul",
    "mat_vec",
    "mirror",
    "nfa_universal",
    "particular_case_check",
    "reduce_universality",
    "scale_set",
    "spectral_radius_estimate",
    "subproduct_containment_check",
    "synthesize_conic",
    "synthesize_ellipsoidal",
    "synthesize_ellipsoidal_direct",
    "topological_numbering",
    "verify_certificate",
    "verify_common_quadratic",
]
