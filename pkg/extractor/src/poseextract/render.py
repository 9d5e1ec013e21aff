"""Side-by-side rendering of a synchronized video pair from an alignment."""

from __future__ import annotations

import json
from pathlib import Path

import cv2
import numpy as np

from .errors import AlignmentMismatchError, UnreadableVideoError

_FALLBACK_FPS = 25.0


def _read_all_frames(path: str | Path) -> tuple[list[np.ndarray], float]:
    cap = cv2.VideoCapture(str(path))
    if not cap.isOpened():
        cap.release()
        raise UnreadableVideoError(f"cannot open video {path!r}")
    fps = cap.get(cv2.CAP_PROP_FPS) or _FALLBACK_FPS
    frames: list[np.ndarray] = []
    try:
        while True:
            ok, frame = cap.read()
            if not ok:
                break
            frames.append(frame)
    finally:
        cap.release()
    if not frames:
        raise UnreadableVideoError(f"no frames decoded from {path!r}")
    return frames, fps


def _resize_to_height(frame: np.ndarray, height: int) -> np.ndarray:
    if frame.shape[0] == height:
        return frame
    width = max(1, int(round(frame.shape[1] * height / frame.shape[0])))
    return cv2.resize(frame, (width, height))


def load_representatives(alignment_path: str | Path) -> list[int]:
    """Representative test index per reference frame from an alignment file."""
    doc = json.loads(Path(alignment_path).read_text(encoding="utf-8"))
    entries = doc["ref_to_test"]
    reps = [-1] * len(entries)
    for entry in entries:
        reps[int(entry["ref"])] = int(entry["rep"])
    if any(rep < 0 for rep in reps):
        raise ValueError(f"{alignment_path}: ref_to_test does not cover all references")
    return reps


def render_side_by_side(
    ref_video: str | Path,
    test_video: str | Path,
    alignment_path: str | Path,
    out_video: str | Path,
) -> Path:
    """Write a video pairing each reference frame with its aligned test frame."""
    reps = load_representatives(alignment_path)
    ref_frames, ref_fps = _read_all_frames(ref_video)
    test_frames, _ = _read_all_frames(test_video)

    if len(reps) > len(ref_frames):
        raise AlignmentMismatchError(
            f"alignment maps {len(reps)} reference frames but the video has {len(ref_frames)}"
        )
    max_rep = max(reps)
    if max_rep >= len(test_frames):
        raise AlignmentMismatchError(
            f"alignment points at test frame {max_rep} but the video has {len(test_frames)}"
        )

    height = max(ref_frames[0].shape[0], test_frames[0].shape[0])
    first_left = _resize_to_height(ref_frames[0], height)
    first_right = _resize_to_height(test_frames[0], height)
    size = (first_left.shape[1] + first_right.shape[1], height)

    writer = cv2.VideoWriter(
        str(out_video), cv2.VideoWriter_fourcc(*"mp4v"), ref_fps, size
    )
    if not writer.isOpened():
        raise UnreadableVideoError(f"cannot open video writer for {out_video!r}")
    try:
        for i, rep in enumerate(reps):
            left = _resize_to_height(ref_frames[i], height)
            right = _resize_to_height(test_frames[rep], height)
            writer.write(np.hstack([left, right]))
    finally:
        writer.release()
    return Path(out_video)
