from __future__ import annotations

import numpy as np
import pytest

from posealign import (
    AlignmentResult,
    Keypoint,
    KeypointName,
    PoseFrame,
    PoseSequence,
)

_K = KeypointName

# Upright T-pose with hips directly below the shoulders: shoulder angles are
# exactly pi/2 and elbows/knees/waist are exactly pi or pi/2 by construction.
T_POSE_POINTS: dict[KeypointName, tuple[float, float]] = {
    _K.NOSE: (0.50, 0.20),
    _K.LEFT_EYE: (0.52, 0.18),
    _K.RIGHT_EYE: (0.48, 0.18),
    _K.LEFT_EAR: (0.54, 0.19),
    _K.RIGHT_EAR: (0.46, 0.19),
    _K.LEFT_SHOULDER: (0.60, 0.35),
    _K.RIGHT_SHOULDER: (0.40, 0.35),
    _K.LEFT_ELBOW: (0.70, 0.35),
    _K.RIGHT_ELBOW: (0.30, 0.35),
    _K.LEFT_WRIST: (0.80, 0.35),
    _K.RIGHT_WRIST: (0.20, 0.35),
    _K.LEFT_HIP: (0.60, 0.60),
    _K.RIGHT_HIP: (0.40, 0.60),
    _K.LEFT_KNEE: (0.60, 0.75),
    _K.RIGHT_KNEE: (0.40, 0.75),
    _K.LEFT_ANKLE: (0.60, 0.90),
    _K.RIGHT_ANKLE: (0.40, 0.90),
}

# Same figure with both arms hanging straight down.
ARMS_DOWN_POINTS = dict(T_POSE_POINTS)
ARMS_DOWN_POINTS.update(
    {
        _K.LEFT_ELBOW: (0.60, 0.47),
        _K.RIGHT_ELBOW: (0.40, 0.47),
        _K.LEFT_WRIST: (0.60, 0.59),
        _K.RIGHT_WRIST: (0.40, 0.59),
    }
)


def make_frame(
    points: dict[KeypointName, tuple[float, float]],
    confidence: float = 1.0,
    overrides: dict[KeypointName, float] | None = None,
) -> PoseFrame:
    overrides = overrides or {}
    kps = []
    for name in KeypointName:
        x, y = points[name]
        kps.append(Keypoint(x, y, overrides.get(name, confidence)))
    return PoseFrame(tuple(kps))


def random_valid_frame(rng: np.random.Generator) -> PoseFrame:
    arr = np.empty((17, 3))
    arr[:, :2] = rng.uniform(0.0, 1.0, (17, 2))
    arr[:, 2] = 1.0
    return PoseFrame.from_array(arr)


def make_sequence(frames, fps: float = 25.0, source: str = "test") -> PoseSequence:
    return PoseSequence(tuple(frames), fps, source)


def transform_frame(
    frame: PoseFrame, rotation: float, translation: tuple[float, float], scale: float
) -> PoseFrame:
    """Apply one similarity transform to every keypoint."""
    arr = frame.to_array()
    cos, sin = np.cos(rotation), np.sin(rotation)
    rot = np.array([[cos, -sin], [sin, cos]])
    arr[:, :2] = scale * (arr[:, :2] @ rot.T) + np.asarray(translation)
    return PoseFrame.from_array(arr)


def assert_valid_path(result: AlignmentResult, n_ref: int, n_test: int) -> None:
    problems = result.path.validate(n_ref, n_test)
    assert problems == [], problems


@pytest.fixture
def t_pose() -> PoseFrame:
    return make_frame(T_POSE_POINTS)


@pytest.fixture
def arms_down() -> PoseFrame:
    return make_frame(ARMS_DOWN_POINTS)
