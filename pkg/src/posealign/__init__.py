"""posealign: pose-based video synchronization.

Aligns two sequences of human-pose keypoints with dynamic time warping over a
joint-angle metric that is invariant to the scale, position, and rotation of
the pose, and scores alignments against ground truth on synthetically
perturbed sequences.
"""

from .dtw import (
    AlignmentResult,
    CostMatrix,
    RefMatch,
    WarpingPath,
    build_cost_matrix,
    dtw_align,
    extract_mapping,
)
from .errors import (
    DegenerateBoundingBoxError,
    IncomparableFramesError,
    IncomparableSequencesError,
    PoseAlignError,
    ScenarioError,
    SchemaError,
)
from .evaluate import (
    EvalReport,
    GroundTruthMap,
    PerturbationSpec,
    apply_perturbation,
    default_scenario_suite,
    format_report_table,
    run_scenario_suite,
    score_alignment,
)
from .keypoints import (
    KEYPOINT_ORDER,
    NUM_KEYPOINTS,
    Keypoint,
    KeypointName,
    PoseFrame,
    PoseSequence,
    Violation,
    load_sequence,
    save_sequence,
    validate_sequence,
)
from .metrics import (
    DEFAULT_JOINT_TRIPLETS,
    JointAngleVector,
    JointSet,
    JointTriplet,
    MetricConfig,
    angle_at_pivot,
    angle_mae,
    frame_angles,
    keypoint_mae,
)
from .synth import MOTIONS, synth_sequence

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "CostMatrix",
    "DEFAULT_JOINT_TRIPLETS",
    "DegenerateBoundingBoxError",
    "EvalReport",
    "GroundTruthMap",
    "IncomparableFramesError",
    "IncomparableSequencesError",
    "JointAngleVector",
    "JointSet",
    "JointTriplet",
    "KEYPOINT_ORDER",
    "Keypoint",
    "KeypointName",
    "MOTIONS",
    "MetricConfig",
    "NUM_KEYPOINTS",
    "PerturbationSpec",
    "PoseAlignError",
    "PoseFrame",
    "PoseSequence",
    "RefMatch",
    "ScenarioError",
    "SchemaError",
    "Violation",
    "WarpingPath",
    "angle_at_pivot",
    "angle_mae",
    "apply_perturbation",
    "build_cost_matrix",
    "default_scenario_suite",
    "dtw_align",
    "extract_mapping",
    "format_report_table",
    "frame_angles",
    "keypoint_mae",
    "load_sequence",
    "run_scenario_suite",
    "save_sequence",
    "score_alignment",
    "synth_sequence",
    "validate_sequence",
    "__version__",
]
