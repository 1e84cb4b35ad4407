"""Two-phase embedding of a bounded-degree pattern into a super-regular blow-up."""

from .cascade import NAMES, PRACTICAL_DEFAULTS, ParameterCascade, compute_cascade
from .core import EmbedConfig, EmbeddingReport, embed, prepare, start_state
from .phase1 import (
    detect_exceptional_G2,
    detect_exceptional_H,
    run_phase1,
    select_image_case1,
    select_image_case2,
)
from .phase2 import konig_conditions, run_phase2
from .preprocess import detect_exceptional_G1, initial_order, select_buffers
from .state import (
    PHASE1_STUCK,
    PHASE2_HALL_FAILURE,
    PREPROCESSING_FAILURE,
    SUCCESS,
    EmbeddingFailure,
    EmbeddingState,
    InternalError,
    Thresholds,
)
from .verify import VerificationReport, verify_embedding

__all__ = [
    "NAMES",
    "PRACTICAL_DEFAULTS",
    "ParameterCascade",
    "compute_cascade",
    "EmbedConfig",
    "EmbeddingReport",
    "embed",
    "prepare",
    "start_state",
    "detect_exceptional_G1",
    "detect_exceptional_G2",
    "detect_exceptional_H",
    "initial_order",
    "select_buffers",
    "select_image_case1",
    "select_image_case2",
    "run_phase1",
    "run_phase2",
    "konig_conditions",
    "verify_embedding",
    "VerificationReport",
    "EmbeddingFailure",
    "EmbeddingState",
    "InternalError",
    "Thresholds",
    "SUCCESS",
    "PHASE1_STUCK",
    "PHASE2_HALL_FAILURE",
    "PREPROCESSING_FAILURE",
]
