"""Deterministic synthetic skeleton animations.

Generates anatomically plausible 17-keypoint sequences by forward kinematics:
fixed bone lengths, smooth joint-angle trajectories, and a seeded low-amplitude
jitter so every frame is unique. Phases drift slowly so no two instants of a
clip repeat exactly, which keeps alignments unambiguous. All confidences are
1.0. The same arguments always produce the identical sequence.
"""

from __future__ import annotations

import numpy as np

from .keypoints import NUM_KEYPOINTS, KeypointName, PoseSequence

MOTIONS = ("arm_wave", "squat", "walk_cycle")

_K = KeypointName

# Skeleton proportions in normalized image coordinates (y grows downward).
_SHOULDER_Y = 0.34
_HIP_Y = 0.56
_SHOULDER_HALF = 0.07
_HIP_HALF = 0.05
_UPPER_ARM = 0.10
_FOREARM = 0.095
_THIGH = 0.12
_SHIN = 0.115
_JITTER_STD = 0.0025


def synth_sequence(motion: str, seconds: float, fps: float, seed: int) -> PoseSequence:
    """Generate a synthetic pose sequence for one of the built-in motions.

    Requires seconds * fps >= 2 so the clip has at least two frames.
    """
    if motion not in MOTIONS:
        raise ValueError(f"unknown motion {motion!r}; choose one of {MOTIONS}")
    if not (seconds > 0 and fps > 0):
        raise ValueError("seconds and fps must be positive")
    if seconds * fps < 2:
        raise ValueError("seconds * fps must be at least 2")

    n = int(round(seconds * fps))
    times = np.arange(n) / fps
    coords = np.stack([_pose_at(motion, float(t)) for t in times])

    rng = np.random.default_rng(seed)
    coords = coords + rng.normal(0.0, _JITTER_STD, size=coords.shape)

    arr = np.concatenate([coords, np.ones((n, NUM_KEYPOINTS, 1))], axis=2)
    source = f"synth:{motion}:{seconds:g}s:{fps:g}fps:seed{seed}"
    return PoseSequence.from_array(arr, fps=fps, source=source)


def _drifting_phase(t: float, f_main: float, f_drift: float, depth: float) -> float:
    return 2.0 * np.pi * (f_main * t + depth * np.sin(2.0 * np.pi * f_drift * t))


def _pose_at(motion: str, t: float) -> np.ndarray:
    if motion == "arm_wave":
        return _arm_wave(t)
    if motion == "squat":
        return _squat(t)
    return _walk_cycle(t)


def _base_points(shoulder_y: float, hip_y: float) -> dict[KeypointName, np.ndarray]:
    pts: dict[KeypointName, np.ndarray] = {}
    nose = np.array([0.5, shoulder_y - 0.08])
    pts[_K.NOSE] = nose
    pts[_K.LEFT_EYE] = nose + [0.018, -0.02]
    pts[_K.RIGHT_EYE] = nose + [-0.018, -0.02]
    pts[_K.LEFT_EAR] = nose + [0.038, -0.01]
    pts[_K.RIGHT_EAR] = nose + [-0.038, -0.01]
    pts[_K.LEFT_SHOULDER] = np.array([0.5 + _SHOULDER_HALF, shoulder_y])
    pts[_K.RIGHT_SHOULDER] = np.array([0.5 - _SHOULDER_HALF, shoulder_y])
    pts[_K.LEFT_HIP] = np.array([0.5 + _HIP_HALF, hip_y])
    pts[_K.RIGHT_HIP] = np.array([0.5 - _HIP_HALF, hip_y])
    return pts


def _attach_arm(
    pts: dict[KeypointName, np.ndarray], side: int, alpha: float, beta: float
) -> None:
    """Place elbow/wrist from direction angles measured outward from straight down."""
    shoulder = pts[_K.LEFT_SHOULDER if side > 0 else _K.RIGHT_SHOULDER]
    elbow = shoulder + _UPPER_ARM * np.array([side * np.sin(alpha), np.cos(alpha)])
    wrist = elbow + _FOREARM * np.array([side * np.sin(beta), np.cos(beta)])
    pts[_K.LEFT_ELBOW if side > 0 else _K.RIGHT_ELBOW] = elbow
    pts[_K.LEFT_WRIST if side > 0 else _K.RIGHT_WRIST] = wrist


def _attach_leg(
    pts: dict[KeypointName, np.ndarray], side: int, thigh_dir: float, shin_dir: float
) -> None:
    """Place knee/ankle from signed direction angles (positive tilts toward +x)."""
    hip = pts[_K.LEFT_HIP if side > 0 else _K.RIGHT_HIP]
    knee = hip + _THIGH * np.array([np.sin(thigh_dir), np.cos(thigh_dir)])
    ankle = knee + _SHIN * np.array([np.sin(shin_dir), np.cos(shin_dir)])
    pts[_K.LEFT_KNEE if side > 0 else _K.RIGHT_KNEE] = knee
    pts[_K.LEFT_ANKLE if side > 0 else _K.RIGHT_ANKLE] = ankle


def _to_array(pts: dict[KeypointName, np.ndarray]) -> np.ndarray:
    return np.stack([pts[k] for k in KeypointName])


def _arm_wave(t: float) -> np.ndarray:
    """Both arms wave between hip level and overhead; stance stays planted."""
    phi = _drifting_phase(t, 0.45, 0.113, 0.22)
    bob = 0.004 * np.sin(2.0 * np.pi * 0.2 * t + 1.0)
    pts = _base_points(_SHOULDER_Y + bob, _HIP_Y + bob)

    alpha = 1.45 + 1.05 * np.sin(phi)
    beta = alpha + 0.45 + 0.30 * np.sin(phi + 0.9)
    for side in (+1, -1):
        _attach_arm(pts, side, alpha, beta)

    sway = 0.04 * np.sin(2.0 * np.pi * 0.21 * t)
    for side in (+1, -1):
        _attach_leg(pts, side, side * 0.06, side * (0.03 + abs(sway)))
    return _to_array(pts)


def _squat(t: float) -> np.ndarray:
    """Repeated squat: hips drop, knees splay, arms raise for balance."""
    phi = _drifting_phase(t, 0.35, 0.091, 0.18)
    depth = 0.5 * (1.0 - np.cos(phi))
    pts = _base_points(_SHOULDER_Y + 0.09 * depth, _HIP_Y + 0.10 * depth)

    alpha = 0.35 + 0.75 * depth
    beta = alpha + 0.25 + 0.20 * depth
    for side in (+1, -1):
        _attach_arm(pts, side, alpha, beta)

    gamma = 0.12 + 0.60 * depth
    for side in (+1, -1):
        _attach_leg(pts, side, side * gamma, -side * 0.8 * gamma)
    return _to_array(pts)


def _walk_cycle(t: float) -> np.ndarray:
    """Walking in place: legs alternate, arms counter-swing, slight bob."""
    phi = _drifting_phase(t, 0.9, 0.137, 0.15)
    bob = 0.005 * np.sin(2.0 * phi)
    pts = _base_points(_SHOULDER_Y + bob, _HIP_Y + bob)

    for side, leg_phase in ((+1, 0.0), (-1, np.pi)):
        lam = 0.42 * np.sin(phi + leg_phase)
        flex = 0.30 * (1.0 + np.sin(phi + leg_phase + 0.8))
        _attach_leg(pts, side, lam, lam - flex)

    for side, arm_phase in ((+1, np.pi), (-1, 0.0)):
        mu = 0.20 * np.sin(phi + arm_phase)
        shoulder = pts[_K.LEFT_SHOULDER if side > 0 else _K.RIGHT_SHOULDER]
        elbow = shoulder + _UPPER_ARM * np.array([np.sin(mu), np.cos(mu)])
        wrist = elbow + _FOREARM * np.array([np.sin(mu * 1.6), np.cos(mu * 1.6)])
        pts[_K.LEFT_ELBOW if side > 0 else _K.RIGHT_ELBOW] = elbow
        pts[_K.LEFT_WRIST if side > 0 else _K.RIGHT_WRIST] = wrist
    return _to_array(pts)
