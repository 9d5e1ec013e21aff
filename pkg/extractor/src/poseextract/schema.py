"""The keypoint-sequence JSON wire format the extractor emits.

This mirrors the interchange contract of the core alignment package: 17 named
keypoints per frame in a fixed order, normalized coordinates, plain JSON
numbers only.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FORMAT_VERSION = "1.0"

KEYPOINT_ORDER: tuple[str, ...] = (
    "nose",
    "left_eye",
    "right_eye",
    "left_ear",
    "right_ear",
    "left_shoulder",
    "right_shoulder",
    "left_elbow",
    "right_elbow",
    "left_wrist",
    "right_wrist",
    "left_hip",
    "right_hip",
    "left_knee",
    "right_knee",
    "left_ankle",
    "right_ankle",
)

NUM_KEYPOINTS = len(KEYPOINT_ORDER)


def write_sequence_json(
    frames: np.ndarray, fps: float, source: str, out_path: str | Path
) -> None:
    """Write an (n, 17, 3) array of x, y, confidence to the interchange format."""
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 3 or frames.shape[1:] != (NUM_KEYPOINTS, 3):
        raise ValueError(f"expected (n, 17, 3) keypoint array, got {frames.shape}")
    if not np.isfinite(frames).all():
        raise ValueError("keypoint array contains non-finite values")
    doc = {
        "format_version": FORMAT_VERSION,
        "fps": float(fps),
        "source": source,
        "keypoint_order": list(KEYPOINT_ORDER),
        "frames": [[[float(x), float(y), float(c)] for x, y, c in frame] for frame in frames],
    }
    Path(out_path).write_text(json.dumps(doc, allow_nan=False) + "\n", encoding="utf-8")
