"""Rendering of marker-coded test clips.

Draws each keypoint of a pose sequence as a filled circle in its marker color
on a black background. Clips rendered this way can be fed back through the
extractor's marker backend, which makes full-pipeline smoke tests possible
without pretrained weights or camera footage.
"""

from __future__ import annotations

from pathlib import Path

import cv2
import numpy as np

from .backends import MARKER_COLORS
from .errors import UnreadableVideoError
from .schema import NUM_KEYPOINTS

MARKER_RADIUS = 4


def draw_marker_frame(
    coords_xy: np.ndarray, width: int, height: int, radius: int = MARKER_RADIUS
) -> np.ndarray:
    """One BGR frame with a colored dot per keypoint (normalized coords in)."""
    if coords_xy.shape != (NUM_KEYPOINTS, 2):
        raise ValueError(f"expected (17, 2) coordinates, got {coords_xy.shape}")
    frame = np.zeros((height, width, 3), dtype=np.uint8)
    for k in range(NUM_KEYPOINTS):
        center = (
            int(round(coords_xy[k, 0] * width)),
            int(round(coords_xy[k, 1] * height)),
        )
        cv2.circle(frame, center, radius, MARKER_COLORS[k], thickness=-1)
    return frame


def write_marker_clip(
    coords: np.ndarray,
    fps: float,
    out_path: str | Path,
    width: int = 480,
    height: int = 360,
    radius: int = MARKER_RADIUS,
) -> Path:
    """Render an (n, 17, 2) normalized-coordinate stack as an mp4 clip."""
    coords = np.asarray(coords, dtype=np.float64)
    writer = cv2.VideoWriter(
        str(out_path), cv2.VideoWriter_fourcc(*"mp4v"), fps, (width, height)
    )
    if not writer.isOpened():
        raise UnreadableVideoError(f"cannot open video writer for {out_path!r}")
    try:
        for frame_coords in coords:
            writer.write(draw_marker_frame(frame_coords, width, height, radius))
    finally:
        writer.release()
    return Path(out_path)
