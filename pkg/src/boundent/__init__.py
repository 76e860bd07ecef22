"""Numerical tools for a 4x4 family of PPT states: partial-transpose spectra,
realignment, and the range-criterion product-vector argument."""

from boundent.errors import (
    BadDims,
    BoundEntError,
    DegenerateScalar,
    NegativeRadicand,
    NoConvergence,
    NormalizationViolated,
    NoStabilization,
    NotHermitian,
    ZeroVector,
)
from boundent.linalg import (
    RangeBasis,
    hermitian_eig,
    kron,
    orthonormal_range,
    singular_values,
    span_of,
    subspace_contains,
    trace_norm,
)
from boundent.states import (
    FamilyParams,
    antisym_A,
    diag_separable,
    family_state,
    pure_from_coeffs,
    rho0,
    rho_a,
    rho_b,
    symmetric_instance,
)
from boundent.ppt import (
    CriterionReport,
    SpectrumReport,
    criterion_report,
    listed_pt_eigenvalues,
    partial_transpose,
    ppt_threshold,
    quartic_pt_roots,
    realignment,
    spectrum_report,
)
from boundent.range_criterion import (
    Certificate,
    ProductVector,
    certify,
    enumerate_families,
    pcc,
    pcc_span,
    product_search,
)

__version__ = "0.1.0"
