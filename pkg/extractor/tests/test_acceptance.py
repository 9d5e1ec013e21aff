"""Extractor acceptance: the full video-in, keypoints-out pipeline on a short
single-person clip, plus side-by-side rendering from an identity alignment."""

import json

import cv2
import numpy as np
from posealign import load_sequence, validate_sequence

from poseextract import ExtractorConfig, extract, render_side_by_side


def _announce(name: str, detail: str) -> None:
    print(f"ACCEPTANCE PASS: {name} ({detail})")


def test_extractor_emits_confident_valid_sequence(marker_clip, tmp_path):
    threshold = 0.5
    out = tmp_path / "kp.json"
    extract(
        ExtractorConfig(
            video=marker_clip, out=str(out), backend="marker",
            detection_threshold=threshold,
        )
    )
    seq = load_sequence(out)
    assert validate_sequence(seq) == []

    mean_conf = seq.to_array()[:, :, 2].mean(axis=1)
    share = float((mean_conf > threshold).mean())
    assert share >= 0.90
    _announce(
        "extractor-valid-and-confident",
        f"{len(seq)} frames, {share * 100:.1f}% above confidence {threshold}",
    )


def test_render_identity_alignment_pairs_equal_frames(marker_clip, tmp_path):
    cap = cv2.VideoCapture(marker_clip)
    n = int(cap.get(cv2.CAP_PROP_FRAME_COUNT))
    cap.release()

    alignment = tmp_path / "identity.json"
    alignment.write_text(
        json.dumps(
            {
                "total_cost": 0.0,
                "normalized_cost": 0.0,
                "path": [[i, i] for i in range(n)],
                "ref_to_test": [{"ref": i, "test": [i], "rep": i} for i in range(n)],
            }
        )
    )
    out = tmp_path / "sync.mp4"
    render_side_by_side(marker_clip, marker_clip, alignment, out)

    cap = cv2.VideoCapture(str(out))
    frames = []
    while True:
        ok, frame = cap.read()
        if not ok:
            break
        frames.append(frame)
    cap.release()
    assert len(frames) == n

    checked = []
    for k in np.linspace(0, n - 1, 5).astype(int):
        frame = frames[k]
        half = frame.shape[1] // 2
        left = frame[:, :half].astype(np.int16)
        right = frame[:, half:].astype(np.int16)
        diff = float(np.abs(left - right).mean())
        assert diff < 3.0, f"panes differ at frame {k}: mean abs diff {diff:.2f}"
        checked.append(int(k))
    _announce(
        "render-identity-panes",
        f"equal panes at frames {checked} of {n}",
    )
