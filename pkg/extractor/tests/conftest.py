from __future__ import annotations

import numpy as np
import pytest
from posealign import synth_sequence

from poseextract import write_marker_clip

CLIP_FPS = 25.0
CLIP_SECONDS = 2.0
CLIP_SIZE = (480, 360)


@pytest.fixture(scope="session")
def motion_coords() -> np.ndarray:
    seq = synth_sequence("arm_wave", CLIP_SECONDS, CLIP_FPS, seed=3)
    return seq.to_array()[:, :, :2]


@pytest.fixture(scope="session")
def marker_clip(tmp_path_factory, motion_coords) -> str:
    path = tmp_path_factory.mktemp("clips") / "person.mp4"
    write_marker_clip(
        motion_coords, CLIP_FPS, path, width=CLIP_SIZE[0], height=CLIP_SIZE[1]
    )
    return str(path)


@pytest.fixture(scope="session")
def empty_clip(tmp_path_factory) -> str:
    import cv2

    path = tmp_path_factory.mktemp("clips") / "empty.mp4"
    writer = cv2.VideoWriter(
        str(path), cv2.VideoWriter_fourcc(*"mp4v"), CLIP_FPS, CLIP_SIZE
    )
    for _ in range(10):
        writer.write(np.zeros((CLIP_SIZE[1], CLIP_SIZE[0], 3), dtype=np.uint8))
    writer.release()
    return str(path)
