"""The video-to-keypoints pipeline: decode, crop, estimate, map back, save."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np

from .backends import PoseBackend, create_backend
from .cropping import (
    DetectorCropper,
    TRACKER_REINIT_INTERVAL,
    TrackerCropper,
    clamp_box,
    crop_image,
    crop_to_full,
    pad_box,
)
from .errors import NoPersonDetectedError, UnreadableVideoError
from .schema import NUM_KEYPOINTS, write_sequence_json

CROPPERS = ("detector", "tracker")
_FALLBACK_FPS = 25.0


@dataclass(frozen=True)
class ExtractorConfig:
    """Extraction parameters.

    stride samples every Nth source frame; the recorded fps is scaled down to
    match, so timing stays correct for downstream alignment.
    """

    video: str
    out: str
    cropper: str = "detector"
    backend: str = "torchvision"
    detection_threshold: float = 0.5
    stride: int = 1
    reinit_interval: int = TRACKER_REINIT_INTERVAL

    def __post_init__(self) -> None:
        if self.cropper not in CROPPERS:
            raise ValueError(f"cropper must be one of {CROPPERS}")
        if not 0.0 <= self.detection_threshold <= 1.0:
            raise ValueError("detection_threshold must lie in [0, 1]")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")


def extract(config: ExtractorConfig, backend: PoseBackend | None = None) -> Path:
    """Convert a video into the keypoint-sequence JSON format.

    Frames where detection or estimation fails are emitted with zero
    confidence; if nothing is ever detected, NoPersonDetectedError reports the
    first frame indices tried.
    """
    if backend is None:
        backend = create_backend(config.backend, config.detection_threshold)

    cap = cv2.VideoCapture(str(config.video))
    if not cap.isOpened():
        cap.release()
        raise UnreadableVideoError(f"cannot open video {config.video!r}")

    fps_in = cap.get(cv2.CAP_PROP_FPS)
    if not fps_in or fps_in <= 0:
        fps_in = _FALLBACK_FPS

    cropper = (
        DetectorCropper(backend)
        if config.cropper == "detector"
        else TrackerCropper(backend, config.reinit_interval)
    )

    rows: list[np.ndarray] = []
    sampled_indices: list[int] = []
    detected_any = False
    frame_index = 0
    try:
        while True:
            ok, frame = cap.read()
            if not ok:
                break
            if frame_index % config.stride == 0:
                sampled_indices.append(frame_index)
                rows.append(_extract_frame(frame, cropper, backend))
                detected_any = detected_any or bool(rows[-1][:, 2].any())
            frame_index += 1
    finally:
        cap.release()

    if not rows:
        raise UnreadableVideoError(f"no frames decoded from {config.video!r}")
    if not detected_any:
        tried = ", ".join(str(i) for i in sampled_indices[:10])
        raise NoPersonDetectedError(
            f"no person detected in any of {len(sampled_indices)} sampled frames "
            f"(first indices tried: {tried})"
        )

    source = (
        f"extract:{Path(config.video).name}:{backend.name}:{config.cropper}"
        f":stride{config.stride}"
    )
    write_sequence_json(
        np.stack(rows), fps=fps_in / config.stride, source=source, out_path=config.out
    )
    return Path(config.out)


def _extract_frame(frame, cropper, backend) -> np.ndarray:
    height, width = frame.shape[:2]
    empty = np.zeros((NUM_KEYPOINTS, 3))

    box = cropper.box_for(frame)
    if box is None:
        return empty
    pixel_box = clamp_box(pad_box(box), width, height)
    keypoints = backend.estimate_pose(crop_image(frame, pixel_box))
    if keypoints is None:
        return empty

    row = np.zeros((NUM_KEYPOINTS, 3))
    full_xy = crop_to_full(keypoints[:, :2], pixel_box)
    row[:, 0] = full_xy[:, 0] / width
    row[:, 1] = full_xy[:, 1] / height
    row[:, 2] = keypoints[:, 2]
    # undetected joints keep position zero rather than a stale crop offset
    row[row[:, 2] <= 0.0, :2] = 0.0
    return row
