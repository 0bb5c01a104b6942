"""Dense-matrix operator calculus.

Shorted operators, parallel sums, range additivity, compatibility,
oblique projections, and a pseudoinverse-of-a-sum update formula, all over
finite-dimensional real inner-product spaces with tolerance-governed
decisions.
"""

from .core import (
    PsdMatrix,
    as_matrix,
    as_psd,
    loewner_leq,
    pinv,
    spectral_norm,
    sqrt_psd,
    svd_rank,
)
from .errors import (
    BlockNotPsd,
    NotCompatible,
    NotComplementary,
    NotPsd,
    NumericalKernelError,
    PreconditionViolated,
    RangeNotContained,
    ShapeMismatchError,
)
from .pinv_sum import (
    BenchBlock,
    PinvSumPreconditions,
    bench_update_vs_recompute,
    pinv_sum,
    pinv_sum_left,
    pinv_sum_precheck,
    pinv_sum_residuals,
    pinv_sum_right,
)
from .projections import (
    ObliqueProjection,
    compatible_projection,
    oblique,
    pinv_of_projection,
    pinv_of_projector_product,
    projection_solution,
)
from .ranges import (
    NullspaceCoverReport,
    PsdClosedRangeReport,
    RangeAdditivityReport,
    compatibility_characterizations,
    disjoint_range_agreement,
    gram_sum_range,
    is_compatible,
    is_range_additive,
    nullspace_cover_report,
    order_equivalent,
    order_square_check,
    preimage_cover_additive,
    psd_closed_range_report,
    range_additivity_report,
    reduced_solution,
    solvability_iff_additive,
)
from .shorted import (
    parallel_sum,
    parallel_sum_block,
    parallel_sum_reduced,
    shorted,
    shorted_parallel_approx,
    shorted_schur,
    shorted_sqrt,
)
from .subspaces import (
    Subspace,
    is_direct_sum,
    nullspace_of,
    preimage,
    principal_angles,
    range_of,
)
from .tolerance import DEFAULT_TOL, ToleranceContext
from .verify import SUITE_NAMES, VerificationReport, run_suite

__version__ = "0.1.0"
