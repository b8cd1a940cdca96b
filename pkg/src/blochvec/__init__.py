"""Coherence-vector representation of density operators with positivity
certification through characteristic-polynomial coefficients."""

__version__ = "0.1.0"

from .coherence import (
    CoherenceState,
    coherence_scale,
    from_coherence,
    is_pure,
    mutual_angle,
    orthogonal_states,
    star,
    to_coherence,
)
from .composite import (
    CompositeLayout,
    CorrelationBlock,
    correlation_det,
    extract_correlation,
    local_invariant_cubic,
    local_invariant_quadratic,
    partial_trace,
    partial_transpose,
    partial_transpose_coherence,
    werner_ppt_boundary,
    werner_state,
    werner_symfns,
)
from .entanglement import (
    ckw_inequality_check,
    concurrence_squared,
    concurrence_squared_bound,
    schmidt_trace_relation,
    spin_flip,
    three_tangle,
)
from .errors import (
    BlochvecError,
    ConsistencyError,
    DimensionError,
    DomainError,
    HermiticityError,
    InconsistentBasisError,
    LayoutError,
    NormalizationError,
    StarUndefinedError,
    UnsupportedOrderError,
)
from .invariants import (
    AdjointElement,
    CasimirSet,
    Degeneracy3,
    Degeneracy4,
    adjoint_multiply,
    casimir_operator,
    casimirs,
    classify_degeneracy_3,
    classify_degeneracy_4,
    symmetric_trace_contraction,
    trace_power_adjoint,
    trace_power_closed,
)
from .positivity import (
    AffineMap,
    SymFnSequence,
    Verdict,
    apply_affine_map,
    check_positivity,
    check_positivity_coherence,
    closed_S234,
    diagonal_family_matrix,
    inversion_bound_check,
    newton_symmetric_functions,
    positivity_verdict,
    symmetric_functions,
    universal_inversion,
    universal_inversion_matrix,
)
from .su_basis import (
    SU3_STANDARD_TO_GROUPED,
    BasisSet,
    StructureTensors,
    basis_from_json,
    basis_to_json,
    build_gellmann_basis,
    build_product_basis,
    gellmann_tensors,
    product_tensors,
    structure_constants,
)

__all__ = [name for name in dir() if not name.startswith("_")]
