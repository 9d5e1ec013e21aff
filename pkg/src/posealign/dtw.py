"""Dynamic time warping over pose-sequence cost matrices.

The alignment is the classic monotone, continuous, boundary-anchored warping
path: it starts at (0, 0), ends at the last frame pair, advances each index by
0 or 1 per step (never both 0), and covers every frame of both sequences. The
optimum is found by dynamic programming and recovered by backtracking with a
fixed tie-break so results are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IncomparableSequencesError
from .keypoints import PoseSequence
from .metrics import (
    ANGLE_MAE,
    KEYPOINT_MAE,
    NORM_BOUNDING_BOX,
    MetricConfig,
    angle_mae_matrix,
    keypoint_mae_matrix,
    normalize_to_bounding_box,
    sequence_angles,
)

# Fill for incomparable pairs: strictly worse than any comparable cost, by one
# full unit of the metric's range (pi for angles, the unit-square diagonal for
# normalized keypoint distances).
ANGLE_RANGE_UNIT = math.pi
KEYPOINT_RANGE_UNIT = math.sqrt(2.0)


@dataclass(frozen=True)
class CostMatrix:
    """Pairwise frame costs between a reference and a test sequence."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.size == 0:
            raise ValueError("cost matrix must be a non-empty 2-D array")
        if not np.isfinite(v).all():
            raise ValueError("cost matrix cells must be finite")
        if (v < 0).any():
            raise ValueError("cost matrix cells must be non-negative")
        object.__setattr__(self, "values", v)

    @property
    def n_ref(self) -> int:
        return self.values.shape[0]

    @property
    def n_test(self) -> int:
        return self.values.shape[1]

    def cell(self, i: int, j: int) -> float:
        return float(self.values[i, j])


@dataclass(frozen=True)
class WarpingPath:
    """Ordered (reference, test) index pairs of an alignment."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.pairs, tuple):
            object.__setattr__(self, "pairs", tuple((int(i), int(j)) for i, j in self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def validate(self, n_ref: int, n_test: int) -> list[str]:
        """Check the four path conditions; returns one message per violation."""
        problems: list[str] = []
        if not self.pairs:
            return ["path is empty"]
        if self.pairs[0] != (0, 0):
            problems.append(f"path starts at {self.pairs[0]}, not (0, 0)")
        if self.pairs[-1] != (n_ref - 1, n_test - 1):
            problems.append(
                f"path ends at {self.pairs[-1]}, not ({n_ref - 1}, {n_test - 1})"
            )
        for k in range(1, len(self.pairs)):
            di = self.pairs[k][0] - self.pairs[k - 1][0]
            dj = self.pairs[k][1] - self.pairs[k - 1][1]
            if di not in (0, 1) or dj not in (0, 1):
                problems.append(f"step {k} moves by ({di}, {dj}); only 0/+1 allowed")
            if di == 0 and dj == 0:
                problems.append(f"step {k} repeats pair {self.pairs[k]}")
        covered_i = {i for i, _ in self.pairs}
        covered_j = {j for _, j in self.pairs}
        if covered_i != set(range(n_ref)):
            problems.append("path does not cover every reference index")
        if covered_j != set(range(n_test)):
            problems.append("path does not cover every test index")
        return problems


@dataclass(frozen=True)
class RefMatch:
    """All test indices matched to one reference frame, plus the representative."""

    ref: int
    test_indices: tuple[int, ...]
    representative: int


@dataclass(frozen=True)
class AlignmentResult:
    """A warping path with its costs and the per-reference-frame mapping."""

    path: WarpingPath
    total_cost: float
    normalized_cost: float
    ref_to_test: tuple[RefMatch, ...]
    step_costs: tuple[float, ...] | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "total_cost": self.total_cost,
            "normalized_cost": self.normalized_cost,
            "path": [[i, j] for i, j in self.path],
            "ref_to_test": [
                {"ref": m.ref, "test": list(m.test_indices), "rep": m.representative}
                for m in self.ref_to_test
            ],
        }
        if self.step_costs is not None:
            doc["step_costs"] = list(self.step_costs)
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "AlignmentResult":
        path = WarpingPath(tuple((int(i), int(j)) for i, j in doc["path"]))
        mapping = tuple(
            RefMatch(int(m["ref"]), tuple(int(j) for j in m["test"]), int(m["rep"]))
            for m in doc["ref_to_test"]
        )
        steps = doc.get("step_costs")
        return cls(
            path=path,
            total_cost=float(doc["total_cost"]),
            normalized_cost=float(doc["normalized_cost"]),
            ref_to_test=mapping,
            step_costs=None if steps is None else tuple(float(s) for s in steps),
        )

    def path_csv_rows(self) -> list[str]:
        return ["ref,test"] + [f"{i},{j}" for i, j in self.path]


def build_cost_matrix(
    ref: PoseSequence, test: PoseSequence, config: MetricConfig
) -> CostMatrix:
    """Evaluate the configured metric on every (reference, test) frame pair.

    Pairs with nothing jointly valid are filled with the maximum comparable
    cost plus one metric-range unit, keeping them strictly worst while leaving
    the dynamic program finite. If no pair at all is comparable the sequences
    cannot be aligned and IncomparableSequencesError is raised.
    """
    arr_ref = ref.to_array()
    arr_test = test.to_array()
    coords_r, conf_r = arr_ref[:, :, :2], arr_ref[:, :, 2]
    coords_t, conf_t = arr_test[:, :, :2], arr_test[:, :, 2]

    if config.metric_kind == ANGLE_MAE:
        ang_r, val_r = sequence_angles(
            coords_r, conf_r, config.joint_set, config.confidence_threshold
        )
        ang_t, val_t = sequence_angles(
            coords_t, conf_t, config.joint_set, config.confidence_threshold
        )
        raw = angle_mae_matrix(
            ang_r, val_r, ang_t, val_t, np.array(config.joint_set.weights)
        )
        unit = ANGLE_RANGE_UNIT
    elif config.metric_kind == KEYPOINT_MAE:
        val_r = conf_r >= config.confidence_threshold
        val_t = conf_t >= config.confidence_threshold
        if config.normalization == NORM_BOUNDING_BOX:
            coords_r = normalize_to_bounding_box(coords_r, val_r, "reference frame")
            coords_t = normalize_to_bounding_box(coords_t, val_t, "test frame")
        raw = keypoint_mae_matrix(
            coords_r, val_r, coords_t, val_t, np.array(config.keypoint_weights)
        )
        unit = KEYPOINT_RANGE_UNIT
    else:  # unreachable: MetricConfig validates the kind
        raise ValueError(f"unknown metric_kind {config.metric_kind!r}")

    comparable = ~np.isnan(raw)
    if not comparable.any():
        raise IncomparableSequencesError(
            "every frame pair is incomparable under the configured metric"
        )
    if not comparable.all():
        fill = float(raw[comparable].max()) + unit
        raw = np.where(comparable, raw, fill)
    return CostMatrix(raw)


def dtw_align(cost: CostMatrix, band: int | None = None) -> AlignmentResult:
    """Find the minimal-cost warping path through a cost matrix.

    The accumulated cost D(i, j) = cost(i, j) + min(D(i-1, j), D(i, j-1),
    D(i-1, j-1)) with D(0, 0) = cost(0, 0). Backtracking breaks ties by
    preferring the diagonal, then the vertical (advance reference), then the
    horizontal step. ``band`` optionally restricts cells to a half-width
    around the scaled diagonal (off by default).
    """
    c = cost.values
    n, m = c.shape
    inf = float("inf")

    if band is not None and band < 0:
        raise ValueError("band half-width must be >= 0")

    def in_band(i: int, j: int) -> bool:
        if band is None:
            return True
        center = i * (m - 1) / (n - 1) if n > 1 else j
        return abs(center - j) <= band

    D = np.full((n, m), inf)
    if in_band(0, 0):
        D[0, 0] = c[0, 0]
    for j in range(1, m):
        if in_band(0, j):
            D[0, j] = c[0, j] + D[0, j - 1]
    for i in range(1, n):
        if in_band(i, 0):
            D[i, 0] = c[i, 0] + D[i - 1, 0]
        prev = D[i - 1]
        cur = D[i]
        ci = c[i]
        for j in range(1, m):
            if not in_band(i, j):
                continue
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = ci[j] + best

    total = float(D[n - 1, m - 1])
    if not math.isfinite(total):
        raise ValueError("band half-width too narrow: no feasible warping path")

    i, j = n - 1, m - 1
    rev = [(i, j)]
    while (i, j) != (0, 0):
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            diag, vert, horiz = D[i - 1, j - 1], D[i - 1, j], D[i, j - 1]
            best = min(diag, vert, horiz)
            if diag == best:
                i, j = i - 1, j - 1
            elif vert == best:
                i -= 1
            else:
                j -= 1
        rev.append((i, j))
    rev.reverse()

    path = WarpingPath(tuple(rev))
    steps = tuple(float(c[i, j]) for i, j in path)
    return AlignmentResult(
        path=path,
        total_cost=total,
        normalized_cost=total / len(path),
        ref_to_test=extract_mapping(path),
        step_costs=steps,
    )


def extract_mapping(path: WarpingPath) -> tuple[RefMatch, ...]:
    """Group the path by reference index; the representative is the lower median
    of each matched run."""
    matches: list[RefMatch] = []
    run: list[int] = []
    current = path.pairs[0][0]
    for i, j in path.pairs:
        if i != current:
            matches.append(_finish_run(current, run))
            current = i
            run = []
        run.append(j)
    matches.append(_finish_run(current, run))
    return tuple(matches)


def _finish_run(ref: int, run: list[int]) -> RefMatch:
    rep = run[(len(run) - 1) // 2]
    return RefMatch(ref=ref, test_indices=tuple(run), representative=rep)
