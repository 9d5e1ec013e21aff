"""Pose estimation backends.

Two interchangeable backends drive the pipeline:

* ``KeypointRcnnBackend`` wraps a pretrained torchvision Keypoint R-CNN, which
  detects people and regresses the standard 17 keypoints in one model. It
  needs the pretrained weights available locally or downloadable.
* ``MarkerBackend`` detects 17 color-coded joint markers and exists so the
  whole pipeline (decoding, cropping, coordinate mapping, serialization) can
  be exercised end to end on synthetic clips without any model weights.
"""

from __future__ import annotations

from typing import Protocol

import cv2
import numpy as np

from .errors import ModelLoadError
from .schema import NUM_KEYPOINTS

Box = tuple[float, float, float, float]  # x0, y0, x1, y1 in pixels

# One BGR color per keypoint, drawn from {0, 128, 255}^3: any two differ by at
# least 127 in some channel. Every color keeps one channel at 255 so that
# codec blends with the black background (which halve all channels) can never
# land within the match distance of another palette entry.
MARKER_COLORS: tuple[tuple[int, int, int], ...] = (
    (255, 0, 0),      # nose
    (0, 255, 0),      # left_eye
    (0, 0, 255),      # right_eye
    (255, 255, 255),  # left_ear
    (255, 0, 255),    # right_ear
    (255, 255, 0),    # left_shoulder
    (0, 255, 255),    # right_shoulder
    (255, 128, 0),    # left_elbow
    (0, 128, 255),    # right_elbow
    (255, 0, 128),    # left_wrist
    (128, 0, 255),    # right_wrist
    (255, 255, 128),  # left_hip
    (128, 255, 255),  # right_hip
    (128, 255, 0),    # left_knee
    (0, 255, 128),    # right_knee
    (255, 128, 255),  # left_ankle
    (128, 128, 255),  # right_ankle
)

_MARKER_MATCH_DISTANCE = 60  # max per-channel error; below half the color spacing
_MIN_MARKER_PIXELS = 4
_MIN_PERSON_PIXELS = 30


def _largest_component_centroid(mask: np.ndarray) -> tuple[float, float] | None:
    """Centroid of the biggest connected blob; codec artifacts around other
    markers form small fragments that must not outvote the real disc."""
    count, _, stats, centroids = cv2.connectedComponentsWithStats(
        mask.astype(np.uint8), connectivity=8
    )
    if count <= 1:
        return None
    sizes = stats[1:, cv2.CC_STAT_AREA]
    best = int(sizes.argmax())
    if sizes[best] < _MIN_MARKER_PIXELS:
        return None
    cx, cy = centroids[1 + best]
    return float(cx), float(cy)


class PoseBackend(Protocol):
    """What the extraction pipeline needs from a pose model."""

    name: str

    def detect_person(self, frame_bgr: np.ndarray) -> tuple[Box, float] | None:
        """Highest-confidence person box in a full frame, or None."""
        ...

    def estimate_pose(self, crop_bgr: np.ndarray) -> np.ndarray | None:
        """(17, 3) array of x, y (crop pixels) and confidence, or None."""
        ...


class MarkerBackend:
    """Finds the 17 color markers; detection is the union of marker pixels."""

    name = "marker"

    def __init__(self, detection_threshold: float = 0.5) -> None:
        self.detection_threshold = detection_threshold
        self._refs = np.array(MARKER_COLORS, dtype=np.int16)

    def _marker_masks(self, frame_bgr: np.ndarray) -> np.ndarray:
        """(17, H, W) boolean masks: pixel is close to color k and closest to it."""
        pixels = frame_bgr.astype(np.int16)
        dists = np.stack(
            [np.abs(pixels - ref).max(axis=2) for ref in self._refs]
        )
        background = np.abs(pixels).max(axis=2)[None, :, :]
        all_dists = np.concatenate([background, dists])
        nearest = all_dists.argmin(axis=0)
        masks = np.zeros((NUM_KEYPOINTS,) + frame_bgr.shape[:2], dtype=bool)
        for k in range(NUM_KEYPOINTS):
            masks[k] = (nearest == k + 1) & (dists[k] <= _MARKER_MATCH_DISTANCE)
        return masks

    def detect_person(self, frame_bgr: np.ndarray) -> tuple[Box, float] | None:
        anything = self._marker_masks(frame_bgr).any(axis=0)
        if anything.sum() < _MIN_PERSON_PIXELS:
            return None
        ys, xs = np.nonzero(anything)
        box = (float(xs.min()), float(ys.min()), float(xs.max() + 1), float(ys.max() + 1))
        return box, 1.0

    def estimate_pose(self, crop_bgr: np.ndarray) -> np.ndarray | None:
        masks = self._marker_masks(crop_bgr)
        out = np.zeros((NUM_KEYPOINTS, 3))
        found = 0
        for k in range(NUM_KEYPOINTS):
            hit = _largest_component_centroid(masks[k])
            if hit is not None:
                out[k] = (hit[0], hit[1], 1.0)
                found += 1
        return out if found else None


class KeypointRcnnBackend:
    """Pretrained torchvision Keypoint R-CNN: person boxes plus 17 keypoints."""

    name = "torchvision"

    def __init__(self, detection_threshold: float = 0.5) -> None:
        self.detection_threshold = detection_threshold
        try:
            import torch
            from torchvision.models.detection import (
                KeypointRCNN_ResNet50_FPN_Weights,
                keypointrcnn_resnet50_fpn,
            )

            self._torch = torch
            self._model = keypointrcnn_resnet50_fpn(
                weights=KeypointRCNN_ResNet50_FPN_Weights.DEFAULT
            )
            self._model.eval()
        except Exception as exc:
            raise ModelLoadError(f"could not load Keypoint R-CNN: {exc}") from exc

    def _infer(self, image_bgr: np.ndarray) -> dict:
        rgb = image_bgr[:, :, ::-1].astype(np.float32) / 255.0
        tensor = self._torch.from_numpy(np.ascontiguousarray(rgb.transpose(2, 0, 1)))
        with self._torch.no_grad():
            return self._model([tensor])[0]

    def detect_person(self, frame_bgr: np.ndarray) -> tuple[Box, float] | None:
        output = self._infer(frame_bgr)
        scores = output["scores"].numpy()
        if len(scores) == 0 or scores.max() < self.detection_threshold:
            return None
        best = int(scores.argmax())
        x0, y0, x1, y1 = output["boxes"].numpy()[best]
        return (float(x0), float(y0), float(x1), float(y1)), float(scores[best])

    def estimate_pose(self, crop_bgr: np.ndarray) -> np.ndarray | None:
        output = self._infer(crop_bgr)
        scores = output["scores"].numpy()
        if len(scores) == 0:
            return None
        best = int(scores.argmax())
        keypoints = output["keypoints"].numpy()[best]  # (17, 3): x, y, visibility
        logits = output["keypoints_scores"].numpy()[best]
        confidences = 1.0 / (1.0 + np.exp(-logits))
        out = np.empty((NUM_KEYPOINTS, 3))
        out[:, :2] = keypoints[:, :2]
        out[:, 2] = np.clip(confidences, 0.0, 1.0)
        return out


_BACKENDS = {
    "marker": MarkerBackend,
    "torchvision": KeypointRcnnBackend,
}

BACKEND_NAMES = tuple(sorted(_BACKENDS))


def create_backend(name: str, detection_threshold: float = 0.5) -> PoseBackend:
    try:
        factory = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; choose one of {BACKEND_NAMES}") from None
    return factory(detection_threshold=detection_threshold)
