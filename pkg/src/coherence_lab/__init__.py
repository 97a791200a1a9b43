"""Coherence quantifiers, incoherent-channel classification, and
factorization-law verification for small quantum systems.

The core package is pure numerics (numpy only); an HTTP service lives in
``coherence_lab.service`` and a thin-client CLI in ``coherence_lab.cli``.
"""

__version__ = "0.1.0"

from .channels import (
    ChannelClassification,
    FsioChannel,
    KrausSet,
    apply_channel,
    apply_fsio,
    classify_kraus,
    fsio_to_kraus,
    gad_channel,
    random_fsio,
)
from .errors import (
    CoherenceLabError,
    DimensionMismatch,
    InvariantViolation,
    ParseError,
    RoofOptimizerError,
)
from .harness import (
    CampaignConfig,
    CampaignResult,
    RoofSettings,
    VerificationRecord,
    records_to_csv,
    run_campaign,
    s_matrix,
    verify_gad,
    verify_t3,
    verify_t4,
    verify_t5,
    verify_t6,
)
from .measures import (
    Ensemble,
    average_g,
    check_strong_monotonicity_g,
    g_coherence,
    g_coherence_pure,
    geometric_mean_kernel,
    l1_coherence,
)
from .roof import RoofResult, convex_roof_g, sampled_roof_bound
from .states import (
    DensityMatrix,
    Permutation,
    PureState,
    eigendecompose,
    make_rng,
    maximally_coherent_state,
    projector,
    random_mixed_state,
    random_pure_state,
)

__all__ = [
    "__version__",
    "CampaignConfig",
    "CampaignResult",
    "ChannelClassification",
    "CoherenceLabError",
    "DensityMatrix",
    "DimensionMismatch",
    "Ensemble",
    "FsioChannel",
    "InvariantViolation",
    "KrausSet",
    "ParseError",
    "Permutation",
    "PureState",
    "RoofOptimizerError",
    "RoofResult",
    "RoofSettings",
    "VerificationRecord",
    "apply_channel",
    "apply_fsio",
    "average_g",
    "check_strong_monotonicity_g",
    "classify_kraus",
    "convex_roof_g",
    "eigendecompose",
    "fsio_to_kraus",
    "g_coherence",
    "g_coherence_pure",
    "gad_channel",
    "geometric_mean_kernel",
    "l1_coherence",
    "make_rng",
    "maximally_coherent_state",
    "projector",
    "random_fsio",
    "random_mixed_state",
    "random_pure_state",
    "records_to_csv",
    "run_campaign",
    "s_matrix",
    "sampled_roof_bound",
    "verify_gad",
    "verify_t3",
    "verify_t4",
    "verify_t5",
    "verify_t6",
]
