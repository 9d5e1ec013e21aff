"""Person cropping: box geometry plus the detector and tracker strategies."""

from __future__ import annotations

import math

import cv2
import numpy as np

from .backends import Box, PoseBackend

CROP_PAD_FRACTION = 0.1
TRACKER_REINIT_INTERVAL = 30


def pad_box(box: Box, fraction: float = CROP_PAD_FRACTION) -> Box:
    """Grow a box on all sides by a fraction of its diagonal so limbs at the
    edge are not clipped before pose estimation."""
    x0, y0, x1, y1 = box
    pad = fraction * math.hypot(x1 - x0, y1 - y0)
    return (x0 - pad, y0 - pad, x1 + pad, y1 + pad)


def clamp_box(box: Box, width: int, height: int) -> tuple[int, int, int, int]:
    """Round a box to integer pixels inside the frame, at least 1x1."""
    x0 = min(max(int(math.floor(box[0])), 0), width - 1)
    y0 = min(max(int(math.floor(box[1])), 0), height - 1)
    x1 = min(max(int(math.ceil(box[2])), x0 + 1), width)
    y1 = min(max(int(math.ceil(box[3])), y0 + 1), height)
    return x0, y0, x1, y1


def crop_image(frame: np.ndarray, box: tuple[int, int, int, int]) -> np.ndarray:
    x0, y0, x1, y1 = box
    return frame[y0:y1, x0:x1]


def crop_to_full(points_xy: np.ndarray, box: tuple[int, int, int, int]) -> np.ndarray:
    """Map crop-pixel coordinates back to full-frame pixels."""
    return points_xy + np.array([box[0], box[1]], dtype=np.float64)


def full_to_crop(points_xy: np.ndarray, box: tuple[int, int, int, int]) -> np.ndarray:
    return points_xy - np.array([box[0], box[1]], dtype=np.float64)


class DetectorCropper:
    """Run the detector on every sampled frame."""

    def __init__(self, backend: PoseBackend) -> None:
        self._backend = backend

    def box_for(self, frame: np.ndarray) -> Box | None:
        hit = self._backend.detect_person(frame)
        return hit[0] if hit else None


class TrackerCropper:
    """Propagate the person box with a MIL tracker, re-seeding it from the
    detector at a fixed interval to bound drift."""

    def __init__(
        self, backend: PoseBackend, reinit_interval: int = TRACKER_REINIT_INTERVAL
    ) -> None:
        if reinit_interval < 1:
            raise ValueError("reinit_interval must be >= 1")
        self._backend = backend
        self._interval = reinit_interval
        self._tracker = None
        self._since_init = 0

    def _detect_and_init(self, frame: np.ndarray) -> Box | None:
        hit = self._backend.detect_person(frame)
        if hit is None:
            self._tracker = None
            return None
        x0, y0, x1, y1 = hit[0]
        roi = (int(x0), int(y0), max(1, int(x1 - x0)), max(1, int(y1 - y0)))
        self._tracker = cv2.TrackerMIL.create()
        self._tracker.init(frame, roi)
        self._since_init = 0
        return hit[0]

    def box_for(self, frame: np.ndarray) -> Box | None:
        if self._tracker is None or self._since_init >= self._interval:
            return self._detect_and_init(frame)
        ok, roi = self._tracker.update(frame)
        if not ok:
            return self._detect_and_init(frame)
        self._since_init += 1
        x, y, w, h = roi
        return (float(x), float(y), float(x + w), float(y + h))
