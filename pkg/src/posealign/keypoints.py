"""Pose data model: the 17-keypoint schema, sequence containers, and the JSON
interchange format.

Coordinates are normalized image coordinates (x in [0,1] left to right, y in
[0,1] top to bottom). Detectors may overshoot the frame slightly, so values
outside [0,1] are tolerated; only non-finite values are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path

import numpy as np

from .errors import SchemaError

FORMAT_VERSION = "1.0"
NUM_KEYPOINTS = 17


class KeypointName(IntEnum):
    """The canonical 17-keypoint order. Index and name are a bijection."""

    NOSE = 0
    LEFT_EYE = 1
    RIGHT_EYE = 2
    LEFT_EAR = 3
    RIGHT_EAR = 4
    LEFT_SHOULDER = 5
    RIGHT_SHOULDER = 6
    LEFT_ELBOW = 7
    RIGHT_ELBOW = 8
    LEFT_WRIST = 9
    RIGHT_WRIST = 10
    LEFT_HIP = 11
    RIGHT_HIP = 12
    LEFT_KNEE = 13
    RIGHT_KNEE = 14
    LEFT_ANKLE = 15
    RIGHT_ANKLE = 16

    @property
    def json_name(self) -> str:
        return self.name.lower()

    @classmethod
    def from_json_name(cls, name: str) -> "KeypointName":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"unknown keypoint name {name!r}") from None


KEYPOINT_ORDER: tuple[str, ...] = tuple(k.json_name for k in KeypointName)

# Anatomical left/right partners, used when mirroring a pose.
LEFT_RIGHT_PAIRS: tuple[tuple[KeypointName, KeypointName], ...] = (
    (KeypointName.LEFT_EYE, KeypointName.RIGHT_EYE),
    (KeypointName.LEFT_EAR, KeypointName.RIGHT_EAR),
    (KeypointName.LEFT_SHOULDER, KeypointName.RIGHT_SHOULDER),
    (KeypointName.LEFT_ELBOW, KeypointName.RIGHT_ELBOW),
    (KeypointName.LEFT_WRIST, KeypointName.RIGHT_WRIST),
    (KeypointName.LEFT_HIP, KeypointName.RIGHT_HIP),
    (KeypointName.LEFT_KNEE, KeypointName.RIGHT_KNEE),
    (KeypointName.LEFT_ANKLE, KeypointName.RIGHT_ANKLE),
)


@dataclass(frozen=True)
class Keypoint:
    """One detected body landmark: normalized position plus detection confidence."""

    x: float
    y: float
    confidence: float


@dataclass(frozen=True)
class PoseFrame:
    """One frame's pose: exactly 17 keypoints in canonical order."""

    keypoints: tuple[Keypoint, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.keypoints, tuple):
            object.__setattr__(self, "keypoints", tuple(self.keypoints))
        if len(self.keypoints) != NUM_KEYPOINTS:
            raise ValueError(
                f"PoseFrame requires exactly {NUM_KEYPOINTS} keypoints, got {len(self.keypoints)}"
            )

    def __getitem__(self, name: KeypointName) -> Keypoint:
        return self.keypoints[int(name)]

    def point(self, name: KeypointName) -> tuple[float, float]:
        kp = self.keypoints[int(name)]
        return (kp.x, kp.y)

    def to_array(self) -> np.ndarray:
        """Return a (17, 3) float array of x, y, confidence rows."""
        return np.array(
            [(kp.x, kp.y, kp.confidence) for kp in self.keypoints], dtype=np.float64
        )

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "PoseFrame":
        if arr.shape != (NUM_KEYPOINTS, 3):
            raise ValueError(f"expected shape (17, 3), got {arr.shape}")
        return cls(tuple(Keypoint(float(x), float(y), float(c)) for x, y, c in arr))


@dataclass(frozen=True)
class PoseSequence:
    """An ordered run of pose frames with its frame rate and provenance."""

    frames: tuple[PoseFrame, ...]
    fps: float
    source: str = ""
    format_version: str = FORMAT_VERSION

    def __post_init__(self) -> None:
        if not isinstance(self.frames, tuple):
            object.__setattr__(self, "frames", tuple(self.frames))

    def __len__(self) -> int:
        return len(self.frames)

    def to_array(self) -> np.ndarray:
        """Return an (n_frames, 17, 3) float array of x, y, confidence."""
        return np.stack([f.to_array() for f in self.frames])

    @classmethod
    def from_array(
        cls,
        arr: np.ndarray,
        fps: float,
        source: str = "",
        format_version: str = FORMAT_VERSION,
    ) -> "PoseSequence":
        frames = tuple(PoseFrame.from_array(a) for a in arr)
        return cls(frames, float(fps), source, format_version)


@dataclass(frozen=True)
class Violation:
    """One schema rule broken by a sequence; data, not an exception."""

    frame: int | None
    keypoint: str | None
    rule: str
    message: str

    def __str__(self) -> str:
        where = "sequence" if self.frame is None else f"frame {self.frame}"
        if self.keypoint is not None:
            where += f", {self.keypoint}"
        return f"{where}: {self.message} [{self.rule}]"


def _major_version(version: str) -> str | None:
    parts = version.split(".")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        return None
    return parts[0]


def validate_sequence(seq: PoseSequence) -> list[Violation]:
    """Check every schema invariant; returns an empty list iff the sequence is valid.

    The acceptance rule is identical to ``load_sequence``: a sequence validates
    cleanly exactly when its saved form would load without error.
    """
    violations: list[Violation] = []

    major = _major_version(seq.format_version)
    if major is None:
        violations.append(
            Violation(None, None, "format_version.syntax",
                      f"format_version {seq.format_version!r} is not 'major.minor'")
        )
    elif major != _major_version(FORMAT_VERSION):
        violations.append(
            Violation(None, None, "format_version.major",
                      f"unsupported major version in {seq.format_version!r}")
        )
    if not (math.isfinite(seq.fps) and seq.fps > 0):
        violations.append(
            Violation(None, None, "fps.positive", f"fps must be a positive finite number, got {seq.fps}")
        )
    if len(seq.frames) == 0:
        violations.append(Violation(None, None, "frames.nonempty", "frame list is empty"))

    for i, frame in enumerate(seq.frames):
        for name, kp in zip(KeypointName, frame.keypoints):
            if not (math.isfinite(kp.x) and math.isfinite(kp.y)):
                violations.append(
                    Violation(i, name.json_name, "coordinate.finite",
                              f"non-finite coordinate ({kp.x}, {kp.y})")
                )
            if not (math.isfinite(kp.confidence) and 0.0 <= kp.confidence <= 1.0):
                violations.append(
                    Violation(i, name.json_name, "confidence.range",
                              f"confidence {kp.confidence} outside [0, 1]")
                )
    return violations


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SchemaError(message)


def _as_number(value: object, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{what} must be a number, got {type(value).__name__}")
    return float(value)


def load_sequence(path: str | Path) -> PoseSequence:
    """Load and validate a keypoint-sequence JSON file.

    Raises OSError on I/O failure and SchemaError on any schema violation; the
    message names the first offending frame index and field.
    """
    text = Path(path).read_text(encoding="utf-8")

    def _reject_constant(token: str) -> float:
        raise SchemaError(f"non-finite JSON token {token!r} is not permitted")

    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc

    _require(isinstance(doc, dict), "top-level value must be an object")
    for key in ("format_version", "fps", "source", "keypoint_order", "frames"):
        _require(key in doc, f"missing required field {key!r}")
    _require(isinstance(doc["format_version"], str), "format_version must be a string")
    _require(isinstance(doc["source"], str), "source must be a string")
    fps = _as_number(doc["fps"], "fps")

    order = doc["keypoint_order"]
    _require(isinstance(order, list), "keypoint_order must be an array")
    if tuple(order) != KEYPOINT_ORDER:
        raise SchemaError(
            "keypoint_order does not match the canonical 17-name order"
        )

    raw_frames = doc["frames"]
    _require(isinstance(raw_frames, list), "frames must be an array")
    _require(len(raw_frames) > 0, "frame list is empty")

    frames: list[PoseFrame] = []
    for i, raw in enumerate(raw_frames):
        _require(isinstance(raw, list), f"frame {i} must be an array of keypoint triples")
        if len(raw) != NUM_KEYPOINTS:
            raise SchemaError(
                f"frame {i} has {len(raw)} keypoints (expected {NUM_KEYPOINTS})"
            )
        kps = []
        for k, triple in enumerate(raw):
            name = KEYPOINT_ORDER[k]
            _require(
                isinstance(triple, list) and len(triple) == 3,
                f"frame {i}, {name}: keypoint must be an [x, y, confidence] triple",
            )
            x = _as_number(triple[0], f"frame {i}, {name}: x")
            y = _as_number(triple[1], f"frame {i}, {name}: y")
            c = _as_number(triple[2], f"frame {i}, {name}: confidence")
            kps.append(Keypoint(x, y, c))
        frames.append(PoseFrame(tuple(kps)))

    seq = PoseSequence(
        tuple(frames), fps, doc["source"], doc["format_version"]
    )
    violations = validate_sequence(seq)
    if violations:
        raise SchemaError(str(violations[0]))
    return seq


def save_sequence(seq: PoseSequence, path: str | Path) -> None:
    """Write the JSON interchange format; numeric fields round-trip exactly."""
    violations = validate_sequence(seq)
    if violations:
        raise SchemaError(str(violations[0]))
    doc = {
        "format_version": seq.format_version,
        "fps": seq.fps,
        "source": seq.source,
        "keypoint_order": list(KEYPOINT_ORDER),
        "frames": [
            [[kp.x, kp.y, kp.confidence] for kp in frame.keypoints]
            for frame in seq.frames
        ],
    }
    Path(path).write_text(
        json.dumps(doc, allow_nan=False) + "\n", encoding="utf-8"
    )
