"""Frame-to-frame pose cost functions.

The primary metric is the joint-angle MAE: each frame is reduced to the
angles at nine body joints, and two frames are compared by the weighted mean
absolute difference of those angles. Angles are unchanged by rotating,
translating, or scaling a pose, so the metric compares body configuration
rather than position in the image. A keypoint-distance MAE is also provided
for when raw positions matter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateBoundingBoxError, IncomparableFramesError
from .keypoints import NUM_KEYPOINTS, KeypointName, PoseFrame

DEFAULT_CONFIDENCE_THRESHOLD = 0.1
MIN_VECTOR_NORM = 1e-12
MIN_BOX_DIAGONAL = 1e-9

ANGLE_MAE = "angle_mae"
KEYPOINT_MAE = "keypoint_mae"
METRIC_KINDS = (ANGLE_MAE, KEYPOINT_MAE)

NORM_NONE = "none"
NORM_BOUNDING_BOX = "bounding_box"
NORMALIZATIONS = (NORM_NONE, NORM_BOUNDING_BOX)


@dataclass(frozen=True)
class JointTriplet:
    """Three keypoints (a, pivot, c) defining the articulation angle at the pivot."""

    name: str
    a: KeypointName
    pivot: KeypointName
    c: KeypointName

    def __post_init__(self) -> None:
        if self.a == self.pivot or self.c == self.pivot:
            raise ValueError(f"triplet {self.name!r} is degenerate: endpoint equals pivot")


_K = KeypointName

DEFAULT_JOINT_TRIPLETS: tuple[JointTriplet, ...] = (
    JointTriplet("left_shoulder_joint", _K.LEFT_HIP, _K.LEFT_SHOULDER, _K.LEFT_ELBOW),
    JointTriplet("right_shoulder_joint", _K.RIGHT_HIP, _K.RIGHT_SHOULDER, _K.RIGHT_ELBOW),
    JointTriplet("right_elbow_joint", _K.RIGHT_SHOULDER, _K.RIGHT_ELBOW, _K.RIGHT_WRIST),
    JointTriplet("left_elbow_joint", _K.LEFT_SHOULDER, _K.LEFT_ELBOW, _K.LEFT_WRIST),
    JointTriplet("right_hip_joint", _K.LEFT_HIP, _K.RIGHT_HIP, _K.RIGHT_KNEE),
    JointTriplet("left_hip_joint", _K.RIGHT_HIP, _K.LEFT_HIP, _K.LEFT_KNEE),
    JointTriplet("right_knee_joint", _K.RIGHT_HIP, _K.RIGHT_KNEE, _K.RIGHT_ANKLE),
    JointTriplet("left_knee_joint", _K.LEFT_HIP, _K.LEFT_KNEE, _K.LEFT_ANKLE),
    JointTriplet("waist_joint", _K.LEFT_SHOULDER, _K.LEFT_HIP, _K.LEFT_KNEE),
)


@dataclass(frozen=True)
class JointSet:
    """An ordered set of joint triplets and their per-joint weights."""

    triplets: tuple[JointTriplet, ...] = DEFAULT_JOINT_TRIPLETS
    weights: tuple[float, ...] = (1.0,) * len(DEFAULT_JOINT_TRIPLETS)

    def __post_init__(self) -> None:
        if not isinstance(self.triplets, tuple):
            object.__setattr__(self, "triplets", tuple(self.triplets))
        if not isinstance(self.weights, tuple):
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.triplets) == 0:
            raise ValueError("joint set must contain at least one triplet")
        if len(self.weights) != len(self.triplets):
            raise ValueError(
                f"{len(self.weights)} weights for {len(self.triplets)} triplets"
            )
        if any(not np.isfinite(w) or w < 0 for w in self.weights):
            raise ValueError("weights must be finite and non-negative")
        if sum(self.weights) <= 0:
            raise ValueError("at least one weight must be positive")

    def index_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Keypoint indices of (a, pivot, c) per triplet, for vectorized lookup."""
        a = np.array([int(t.a) for t in self.triplets])
        p = np.array([int(t.pivot) for t in self.triplets])
        c = np.array([int(t.c) for t in self.triplets])
        return a, p, c

    @classmethod
    def default(cls) -> "JointSet":
        return cls()

    def to_dict(self) -> dict:
        return {
            "triplets": [
                {"name": t.name, "a": t.a.json_name, "pivot": t.pivot.json_name, "c": t.c.json_name}
                for t in self.triplets
            ],
            "weights": list(self.weights),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "JointSet":
        triplets = tuple(
            JointTriplet(
                str(t["name"]),
                KeypointName.from_json_name(t["a"]),
                KeypointName.from_json_name(t["pivot"]),
                KeypointName.from_json_name(t["c"]),
            )
            for t in doc["triplets"]
        )
        weights = tuple(float(w) for w in doc.get("weights", [1.0] * len(triplets)))
        return cls(triplets, weights)


@dataclass(frozen=True)
class JointAngleVector:
    """Evaluated joint angles for one frame; angles are meaningful only where valid."""

    angles: np.ndarray
    valid_mask: np.ndarray


@dataclass(frozen=True)
class MetricConfig:
    """Everything needed to compare two frames: metric kind, joints, weights, gating."""

    metric_kind: str = ANGLE_MAE
    joint_set: JointSet = field(default_factory=JointSet.default)
    keypoint_weights: tuple[float, ...] = (1.0,) * NUM_KEYPOINTS
    confidence_threshold: float = DEFAULT_CONFIDENCE_THRESHOLD
    normalization: str = NORM_NONE

    def __post_init__(self) -> None:
        if self.metric_kind not in METRIC_KINDS:
            raise ValueError(f"unknown metric_kind {self.metric_kind!r}")
        if not isinstance(self.keypoint_weights, tuple):
            object.__setattr__(
                self, "keypoint_weights", tuple(float(w) for w in self.keypoint_weights)
            )
        if len(self.keypoint_weights) != NUM_KEYPOINTS:
            raise ValueError(f"keypoint_weights must have {NUM_KEYPOINTS} entries")
        if any(not np.isfinite(w) or w < 0 for w in self.keypoint_weights):
            raise ValueError("keypoint_weights must be finite and non-negative")
        if sum(self.keypoint_weights) <= 0:
            raise ValueError("at least one keypoint weight must be positive")
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise ValueError("confidence_threshold must lie in [0, 1]")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization {self.normalization!r}")

    def to_dict(self) -> dict:
        return {
            "metric_kind": self.metric_kind,
            "joint_set": self.joint_set.to_dict(),
            "keypoint_weights": list(self.keypoint_weights),
            "confidence_threshold": self.confidence_threshold,
            "normalization": self.normalization,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "MetricConfig":
        kwargs: dict = {}
        if "metric_kind" in doc:
            kwargs["metric_kind"] = str(doc["metric_kind"])
        if "joint_set" in doc:
            kwargs["joint_set"] = JointSet.from_dict(doc["joint_set"])
        if "keypoint_weights" in doc:
            kwargs["keypoint_weights"] = tuple(float(w) for w in doc["keypoint_weights"])
        if "confidence_threshold" in doc:
            kwargs["confidence_threshold"] = float(doc["confidence_threshold"])
        if "normalization" in doc:
            kwargs["normalization"] = str(doc["normalization"])
        return cls(**kwargs)


def angle_at_pivot(
    a: Sequence[float], pivot: Sequence[float], c: Sequence[float]
) -> float | None:
    """Unsigned angle in [0, pi] between (a - pivot) and (c - pivot).

    Returns None when either arm of the angle is shorter than MIN_VECTOR_NORM.
    Uses atan2 of the cross/dot magnitudes, which stays accurate near 0 and pi
    where an arccosine formulation loses precision.
    """
    v1x, v1y = a[0] - pivot[0], a[1] - pivot[1]
    v2x, v2y = c[0] - pivot[0], c[1] - pivot[1]
    if np.hypot(v1x, v1y) < MIN_VECTOR_NORM or np.hypot(v2x, v2y) < MIN_VECTOR_NORM:
        return None
    cross = v1x * v2y - v1y * v2x
    dot = v1x * v2x + v1y * v2y
    return float(np.arctan2(abs(cross), dot))


def sequence_angles(
    coords: np.ndarray,
    confidences: np.ndarray,
    joint_set: JointSet,
    confidence_threshold: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Joint angles and validity for a stack of frames.

    coords: (n, 17, 2) keypoint positions; confidences: (n, 17).
    Returns (angles, valid) with shape (n, n_joints); invalid entries hold 0.
    """
    a_idx, p_idx, c_idx = joint_set.index_arrays()
    v1 = coords[:, a_idx, :] - coords[:, p_idx, :]
    v2 = coords[:, c_idx, :] - coords[:, p_idx, :]
    n1 = np.hypot(v1[..., 0], v1[..., 1])
    n2 = np.hypot(v2[..., 0], v2[..., 1])
    defined = (n1 >= MIN_VECTOR_NORM) & (n2 >= MIN_VECTOR_NORM)
    cross = v1[..., 0] * v2[..., 1] - v1[..., 1] * v2[..., 0]
    dot = v1[..., 0] * v2[..., 0] + v1[..., 1] * v2[..., 1]
    angles = np.where(defined, np.arctan2(np.abs(cross), dot), 0.0)
    conf_ok = (
        (confidences[:, a_idx] >= confidence_threshold)
        & (confidences[:, p_idx] >= confidence_threshold)
        & (confidences[:, c_idx] >= confidence_threshold)
    )
    return angles, defined & conf_ok


def frame_angles(
    frame: PoseFrame,
    joint_set: JointSet | None = None,
    confidence_threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> JointAngleVector:
    """Evaluate every joint of the set on one frame, gating by confidence."""
    joint_set = joint_set or JointSet.default()
    arr = frame.to_array()[None, :, :]
    angles, valid = sequence_angles(
        arr[:, :, :2], arr[:, :, 2], joint_set, confidence_threshold
    )
    return JointAngleVector(angles[0], valid[0])


def angle_mae_matrix(
    angles_a: np.ndarray,
    valid_a: np.ndarray,
    angles_b: np.ndarray,
    valid_b: np.ndarray,
    weights: np.ndarray,
) -> np.ndarray:
    """Pairwise weighted angle MAE between two angle stacks.

    Returns an (n, m) matrix; entries with no jointly valid joints (or zero
    total weight there) are NaN. Weights renormalize over the valid subset.
    """
    diff = np.abs(angles_a[:, None, :] - angles_b[None, :, :])
    both = valid_a[:, None, :] & valid_b[None, :, :]
    w = np.where(both, weights, 0.0)
    wsum = w.sum(axis=-1)
    num = (diff * w).sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        cost = num / wsum
    cost[wsum <= 0.0] = np.nan
    return cost


def keypoint_mae_matrix(
    coords_a: np.ndarray,
    valid_a: np.ndarray,
    coords_b: np.ndarray,
    valid_b: np.ndarray,
    weights: np.ndarray,
) -> np.ndarray:
    """Pairwise weighted mean keypoint distance; NaN where nothing is comparable."""
    delta = coords_a[:, None, :, :] - coords_b[None, :, :, :]
    dist = np.hypot(delta[..., 0], delta[..., 1])
    both = valid_a[:, None, :] & valid_b[None, :, :]
    w = np.where(both, weights, 0.0)
    wsum = w.sum(axis=-1)
    num = (dist * w).sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        cost = num / wsum
    cost[wsum <= 0.0] = np.nan
    return cost


def normalize_to_bounding_box(
    coords: np.ndarray, valid: np.ndarray, what: str = "frame"
) -> np.ndarray:
    """Map each frame's keypoints into its own tight pose box.

    Translates to the box origin and divides by the box diagonal, removing
    position and scale. Frames with no valid keypoints pass through as zeros
    (they are incomparable downstream anyway).
    """
    guarded = np.where(valid[..., None], coords, np.nan)
    with np.errstate(invalid="ignore"):
        mins = np.nanmin(guarded, axis=1)
        maxs = np.nanmax(guarded, axis=1)
    any_valid = valid.any(axis=1)
    mins = np.where(any_valid[:, None], mins, 0.0)
    maxs = np.where(any_valid[:, None], maxs, 0.0)
    span = maxs - mins
    diag = np.hypot(span[:, 0], span[:, 1])
    bad = any_valid & (diag < MIN_BOX_DIAGONAL)
    if bad.any():
        idx = int(np.argmax(bad))
        raise DegenerateBoundingBoxError(
            f"{what} {idx}: pose bounding box diagonal {diag[idx]:.3g} is below {MIN_BOX_DIAGONAL}"
        )
    diag = np.where(any_valid, diag, 1.0)
    return (coords - mins[:, None, :]) / diag[:, None, None]


def angle_mae(frame_a: PoseFrame, frame_b: PoseFrame, config: MetricConfig) -> float:
    """Weighted mean absolute joint-angle difference between two frames.

    Only joints valid in both frames contribute; weights renormalize over that
    subset. Raises IncomparableFramesError when no joint is valid in both.
    """
    if config.metric_kind != ANGLE_MAE:
        raise ValueError(f"config.metric_kind is {config.metric_kind!r}, expected {ANGLE_MAE!r}")
    va = frame_angles(frame_a, config.joint_set, config.confidence_threshold)
    vb = frame_angles(frame_b, config.joint_set, config.confidence_threshold)
    cost = angle_mae_matrix(
        va.angles[None, :], va.valid_mask[None, :],
        vb.angles[None, :], vb.valid_mask[None, :],
        np.array(config.joint_set.weights),
    )[0, 0]
    if np.isnan(cost):
        raise IncomparableFramesError("no joint is valid in both frames")
    return float(cost)


def keypoint_mae(frame_a: PoseFrame, frame_b: PoseFrame, config: MetricConfig) -> float:
    """Weighted mean distance between corresponding confidence-valid keypoints."""
    if config.metric_kind != KEYPOINT_MAE:
        raise ValueError(
            f"config.metric_kind is {config.metric_kind!r}, expected {KEYPOINT_MAE!r}"
        )
    arr_a = frame_a.to_array()[None, :, :]
    arr_b = frame_b.to_array()[None, :, :]
    coords_a, conf_a = arr_a[:, :, :2], arr_a[:, :, 2]
    coords_b, conf_b = arr_b[:, :, :2], arr_b[:, :, 2]
    valid_a = conf_a >= config.confidence_threshold
    valid_b = conf_b >= config.confidence_threshold
    if config.normalization == NORM_BOUNDING_BOX:
        coords_a = normalize_to_bounding_box(coords_a, valid_a)
        coords_b = normalize_to_bounding_box(coords_b, valid_b)
    cost = keypoint_mae_matrix(
        coords_a, valid_a, coords_b, valid_b, np.array(config.keypoint_weights)
    )[0, 0]
    if np.isnan(cost):
        raise IncomparableFramesError("no keypoint is valid in both frames")
    return float(cost)
