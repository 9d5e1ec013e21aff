"""Scenario harness: perturb a sequence with a known ground-truth frame
correspondence, align it back against the original, and score how much of the
video matched.

Each perturbation is exactly invertible at the bookkeeping level: it returns
both the perturbed sequence and the true reference-to-test frame map it
induced, so alignment accuracy can be scored without any hand labeling.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .dtw import AlignmentResult, build_cost_matrix, dtw_align
from .errors import PoseAlignError, ScenarioError
from .keypoints import (
    LEFT_RIGHT_PAIRS,
    NUM_KEYPOINTS,
    PoseFrame,
    PoseSequence,
)
from .metrics import MetricConfig

PERTURBATION_KINDS = (
    "speed_change",
    "insert_noise",
    "insert_clip",
    "reorder_segments",
    "flip_horizontal",
    "zoom",
)

POSITIONS = ("start", "middle", "end")

DEFAULT_TOLERANCE_FRAMES = 2


@dataclass(frozen=True)
class PerturbationSpec:
    """One controlled transform of a sequence. Fields are per kind:

    speed_change     factor (> 0; < 1 slows down), region fractions of the source
    insert_noise     duration_seconds, position
    insert_clip      duration_seconds, position, donor sequence
    reorder_segments boundaries (interior cut fractions), permutation
    flip_horizontal  no parameters
    zoom             scale (> 0), center
    """

    kind: str
    factor: float | None = None
    region: tuple[float, float] = (0.0, 1.0)
    duration_seconds: float | None = None
    position: str | None = None
    donor: PoseSequence | None = None
    boundaries: tuple[float, ...] | None = None
    permutation: tuple[int, ...] | None = None
    scale: float | None = None
    center: tuple[float, float] = (0.5, 0.5)
    name: str | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in PERTURBATION_KINDS:
            raise ValueError(f"unknown perturbation kind {self.kind!r}")
        if self.kind == "speed_change":
            if self.factor is None or not self.factor > 0:
                raise ValueError("speed_change requires factor > 0")
            s, e = self.region
            if not (0.0 <= s < e <= 1.0):
                raise ValueError("region must satisfy 0 <= start < end <= 1")
        elif self.kind in ("insert_noise", "insert_clip"):
            if self.duration_seconds is None or not self.duration_seconds > 0:
                raise ValueError(f"{self.kind} requires duration_seconds > 0")
            if self.position not in POSITIONS:
                raise ValueError(f"position must be one of {POSITIONS}")
            if self.kind == "insert_clip" and self.donor is None:
                raise ValueError("insert_clip requires a donor sequence")
        elif self.kind == "reorder_segments":
            if not self.boundaries or self.permutation is None:
                raise ValueError("reorder_segments requires boundaries and permutation")
            bs = self.boundaries
            if any(not 0.0 < b < 1.0 for b in bs) or list(bs) != sorted(set(bs)):
                raise ValueError("boundaries must be strictly increasing fractions in (0, 1)")
            if sorted(self.permutation) != list(range(len(bs) + 1)):
                raise ValueError("permutation must permute the segment indices")
        elif self.kind == "zoom":
            if self.scale is None or not self.scale > 0:
                raise ValueError("zoom requires scale > 0")

    def describe(self) -> str:
        if self.name:
            return self.name
        if self.kind == "speed_change":
            s, e = self.region
            where = "whole clip" if (s, e) == (0.0, 1.0) else f"region [{s:.2f}, {e:.2f}]"
            return f"speed x{self.factor:g} over {where}"
        if self.kind == "insert_noise":
            return f"noise {self.duration_seconds:g}s at {self.position}"
        if self.kind == "insert_clip":
            return f"foreign clip {self.duration_seconds:g}s at {self.position}"
        if self.kind == "reorder_segments":
            return f"reorder {len(self.boundaries) + 1} segments as {list(self.permutation)}"
        if self.kind == "flip_horizontal":
            return "flip horizontal"
        return f"zoom x{self.scale:g}"

    @classmethod
    def from_dict(
        cls,
        doc: dict,
        load_donor: Callable[[dict], PoseSequence] | None = None,
    ) -> "PerturbationSpec":
        if not isinstance(doc, dict):
            raise ValueError("scenario entry must be an object")
        kind = doc.get("kind")
        if kind not in PERTURBATION_KINDS:
            raise ValueError(f"unknown perturbation kind {kind!r}")
        kwargs: dict = {"kind": kind}
        if "factor" in doc:
            kwargs["factor"] = float(doc["factor"])
        if "region" in doc:
            kwargs["region"] = (float(doc["region"][0]), float(doc["region"][1]))
        if "duration_seconds" in doc:
            kwargs["duration_seconds"] = float(doc["duration_seconds"])
        if "position" in doc:
            kwargs["position"] = str(doc["position"])
        if "boundaries" in doc:
            kwargs["boundaries"] = tuple(float(b) for b in doc["boundaries"])
        if "permutation" in doc:
            kwargs["permutation"] = tuple(int(p) for p in doc["permutation"])
        if "scale" in doc:
            kwargs["scale"] = float(doc["scale"])
        if "center" in doc:
            kwargs["center"] = (float(doc["center"][0]), float(doc["center"][1]))
        if "name" in doc:
            kwargs["name"] = str(doc["name"])
        if "seed" in doc:
            kwargs["seed"] = int(doc["seed"])
        if "donor" in doc:
            if load_donor is None:
                raise ValueError("scenario has a donor but no donor loader was provided")
            kwargs["donor"] = load_donor(doc["donor"])
        return cls(**kwargs)


@dataclass(frozen=True)
class GroundTruthMap:
    """The exact correspondence a perturbation induced.

    ref_to_test[i] is the true test index for reference frame i (None when the
    reference content is absent from the test sequence); noise_test_indices
    are test frames with no reference counterpart.
    """

    ref_to_test: tuple[int | None, ...]
    noise_test_indices: frozenset[int]
    n_test: int


@dataclass(frozen=True)
class EvalReport:
    """Accuracy of one scenario: how many reference frames aligned close enough."""

    scenario: str
    n_expected: int
    n_matched: int
    percent_matched: float
    tolerance_frames: int
    total_cost: float
    normalized_cost: float
    ref_frames: int
    test_frames: int

    def to_json_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "n_expected": self.n_expected,
            "n_matched": self.n_matched,
            "percent_matched": self.percent_matched,
            "tolerance_frames": self.tolerance_frames,
            "total_cost": self.total_cost,
            "normalized_cost": self.normalized_cost,
            "ref_frames": self.ref_frames,
            "test_frames": self.test_frames,
        }


def _random_pose_frames(n: int, rng: np.random.Generator) -> list[PoseFrame]:
    """Valid but arbitrary poses: the stand-in for irrelevant video content."""
    arr = np.empty((n, NUM_KEYPOINTS, 3))
    arr[:, :, :2] = rng.uniform(0.05, 0.95, size=(n, NUM_KEYPOINTS, 2))
    arr[:, :, 2] = 1.0
    return [PoseFrame.from_array(a) for a in arr]


def _frame_span(frac: float, n: int) -> int:
    return int(round(frac * n))


def _annotate(seq: PoseSequence, spec: PerturbationSpec) -> str:
    return f"{seq.source}|{spec.describe()}" if seq.source else spec.describe()


def apply_perturbation(
    source: PoseSequence, spec: PerturbationSpec, seed: int | None = None
) -> tuple[PoseSequence, GroundTruthMap]:
    """Apply one perturbation and return the induced true correspondence."""
    if seed is None:
        seed = spec.seed
    n = len(source)
    handlers = {
        "speed_change": _apply_speed_change,
        "insert_noise": _apply_insert,
        "insert_clip": _apply_insert,
        "reorder_segments": _apply_reorder,
        "flip_horizontal": _apply_flip,
        "zoom": _apply_zoom,
    }
    frames, mapping, noise = handlers[spec.kind](source, spec, seed)
    perturbed = PoseSequence(
        tuple(frames), source.fps, _annotate(source, spec), source.format_version
    )
    truth = GroundTruthMap(
        ref_to_test=tuple(mapping),
        noise_test_indices=frozenset(noise),
        n_test=len(frames),
    )
    assert len(truth.ref_to_test) == n
    return perturbed, truth


def _apply_speed_change(source: PoseSequence, spec: PerturbationSpec, seed: int):
    n = len(source)
    s0 = _frame_span(spec.region[0], n)
    s1 = _frame_span(spec.region[1], n)
    region_len = s1 - s0
    if region_len < 1:
        raise ScenarioError(
            f"speed_change region {spec.region} selects no frames of a {n}-frame sequence"
        )
    out_len = max(1, int(round(region_len / spec.factor)))
    # Nearest-frame resampling: output frame k in the region shows this source frame.
    src_of = [s0 + min(region_len - 1, (k * region_len) // out_len) for k in range(out_len)]

    frames = (
        list(source.frames[:s0])
        + [source.frames[s] for s in src_of]
        + list(source.frames[s1:])
    )

    src_arr = np.array(src_of)
    mapping: list[int | None] = []
    for i in range(n):
        if i < s0:
            mapping.append(i)
        elif i < s1:
            # first output frame whose source is nearest to reference i
            k = int(np.argmin(np.abs(src_arr - i)))
            mapping.append(s0 + k)
        else:
            mapping.append(i - region_len + out_len)
    return frames, mapping, set()


def _apply_insert(source: PoseSequence, spec: PerturbationSpec, seed: int):
    n = len(source)
    n_insert = int(round(spec.duration_seconds * source.fps))
    if n_insert < 1:
        raise ScenarioError(
            f"duration {spec.duration_seconds}s rounds to zero frames at {source.fps} fps"
        )
    pos = {"start": 0, "middle": n // 2, "end": n}[spec.position]

    if spec.kind == "insert_clip":
        if len(spec.donor) < n_insert:
            raise ScenarioError(
                f"donor has {len(spec.donor)} frames; {n_insert} needed"
            )
        inserted = list(spec.donor.frames[:n_insert])
    else:
        inserted = _random_pose_frames(n_insert, np.random.default_rng(seed))

    frames = list(source.frames[:pos]) + inserted + list(source.frames[pos:])
    mapping: list[int | None] = [i if i < pos else i + n_insert for i in range(n)]
    noise = set(range(pos, pos + n_insert))
    return frames, mapping, noise


def _apply_reorder(source: PoseSequence, spec: PerturbationSpec, seed: int):
    n = len(source)
    cuts = [0] + [_frame_span(b, n) for b in spec.boundaries] + [n]
    if cuts != sorted(set(cuts)):
        raise ScenarioError(
            f"boundaries {spec.boundaries} produce an empty segment on a {n}-frame sequence"
        )
    segments = [list(range(cuts[s], cuts[s + 1])) for s in range(len(cuts) - 1)]

    frames: list[PoseFrame] = []
    start_in_test = {}
    for seg_id in spec.permutation:
        start_in_test[seg_id] = len(frames)
        frames.extend(source.frames[i] for i in segments[seg_id])

    mapping: list[int | None] = [None] * n
    for seg_id, seg in enumerate(segments):
        base = start_in_test[seg_id]
        for offset, i in enumerate(seg):
            mapping[i] = base + offset
    return frames, mapping, set()


def _apply_flip(source: PoseSequence, spec: PerturbationSpec, seed: int):
    arr = source.to_array()
    arr[:, :, 0] = 1.0 - arr[:, :, 0]
    swap = np.arange(NUM_KEYPOINTS)
    for left, right in LEFT_RIGHT_PAIRS:
        swap[int(left)], swap[int(right)] = int(right), int(left)
    arr = arr[:, swap, :]
    frames = [PoseFrame.from_array(a) for a in arr]
    return frames, list(range(len(source))), set()


def _apply_zoom(source: PoseSequence, spec: PerturbationSpec, seed: int):
    arr = source.to_array()
    center = np.array(spec.center)
    arr[:, :, :2] = center + spec.scale * (arr[:, :, :2] - center)
    frames = [PoseFrame.from_array(a) for a in arr]
    return frames, list(range(len(source))), set()


def score_alignment(
    result: AlignmentResult, truth: GroundTruthMap, tolerance_frames: int
) -> EvalReport:
    """Count reference frames whose representative test frame lands within
    tolerance of the ground truth."""
    if tolerance_frames < 0:
        raise ValueError("tolerance_frames must be >= 0")
    n_ref = len(result.ref_to_test)
    if n_ref != len(truth.ref_to_test):
        raise ValueError(
            f"alignment covers {n_ref} reference frames, ground truth {len(truth.ref_to_test)}"
        )
    n_expected = 0
    n_matched = 0
    for match, true_j in zip(result.ref_to_test, truth.ref_to_test):
        if true_j is None:
            continue
        n_expected += 1
        if abs(match.representative - true_j) <= tolerance_frames:
            n_matched += 1
    percent = 100.0 * n_matched / n_expected if n_expected else 0.0
    return EvalReport(
        scenario="",
        n_expected=n_expected,
        n_matched=n_matched,
        percent_matched=percent,
        tolerance_frames=tolerance_frames,
        total_cost=result.total_cost,
        normalized_cost=result.normalized_cost,
        ref_frames=n_ref,
        test_frames=truth.n_test,
    )


def run_scenario_suite(
    base: PoseSequence,
    scenarios: Sequence[PerturbationSpec],
    config: MetricConfig | None = None,
    tolerance_frames: int = DEFAULT_TOLERANCE_FRAMES,
) -> list[EvalReport]:
    """Perturb, align, and score each scenario against the base sequence."""
    config = config or MetricConfig()
    reports: list[EvalReport] = []
    for spec in scenarios:
        label = spec.describe()
        try:
            perturbed, truth = apply_perturbation(base, spec)
            cost = build_cost_matrix(base, perturbed, config)
            result = dtw_align(cost)
            report = score_alignment(result, truth, tolerance_frames)
        except PoseAlignError as exc:
            raise type(exc)(f"scenario {label!r}: {exc}") from exc
        reports.append(replace(report, scenario=label))
    return reports


def default_scenario_suite(donor: PoseSequence) -> list[PerturbationSpec]:
    """One scenario per supported perturbation family, at stock parameters."""
    return [
        PerturbationSpec("speed_change", factor=1.0, name="identity"),
        PerturbationSpec("speed_change", factor=0.5, name="slow down x2"),
        PerturbationSpec("speed_change", factor=0.25, name="slow down x4"),
        PerturbationSpec("speed_change", factor=2.0, name="speed up x2"),
        PerturbationSpec(
            "speed_change", factor=0.5, region=(0.375, 0.625), name="slow middle section x2"
        ),
        PerturbationSpec("insert_noise", duration_seconds=2.0, position="start", seed=11),
        PerturbationSpec("insert_noise", duration_seconds=2.0, position="middle", seed=12),
        PerturbationSpec("insert_noise", duration_seconds=2.0, position="end", seed=13),
        PerturbationSpec(
            "insert_clip", duration_seconds=2.0, position="middle", donor=donor,
            name="foreign clip 2s at middle",
        ),
        PerturbationSpec(
            "reorder_segments", boundaries=(0.5,), permutation=(1, 0), name="swap halves"
        ),
        PerturbationSpec("flip_horizontal"),
        PerturbationSpec("zoom", scale=1.5),
    ]


def format_report_table(reports: Sequence[EvalReport]) -> str:
    """Plain-text accuracy table, one row per scenario."""
    headers = ("ref frames", "test description", "expected", "matched", "% matched")
    rows = [
        (
            str(r.ref_frames),
            r.scenario,
            str(r.n_expected),
            str(r.n_matched),
            f"{r.percent_matched:.2f}",
        )
        for r in reports
    ]
    widths = [max(len(h), *(len(row[c]) for row in rows)) if rows else len(h)
              for c, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(widths[c]) for c, h in enumerate(headers)),
        "  ".join("-" * widths[c] for c in range(len(headers))),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)))
    return "\n".join(lines)
