import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import acos_angle
from conftest import (
    ARMS_DOWN_POINTS,
    T_POSE_POINTS,
    make_frame,
    random_valid_frame,
    transform_frame,
)
from posealign import (
    DEFAULT_JOINT_TRIPLETS,
    IncomparableFramesError,
    JointSet,
    JointTriplet,
    KeypointName,
    MetricConfig,
    PoseFrame,
    angle_at_pivot,
    angle_mae,
    frame_angles,
    keypoint_mae,
)
from posealign.errors import DegenerateBoundingBoxError

_K = KeypointName

finite_coord = st.floats(-10.0, 10.0)


class TestAngleAtPivot:
    def test_perpendicular(self):
        assert angle_at_pivot((0, 1), (0, 0), (1, 0)) == pytest.approx(math.pi / 2)

    def test_collinear_same_direction(self):
        assert angle_at_pivot((1, 0), (0, 0), (2, 0)) == pytest.approx(0.0, abs=1e-15)

    def test_collinear_opposite(self):
        assert angle_at_pivot((-1, 0), (0, 0), (1, 0)) == pytest.approx(math.pi)

    def test_zero_length_arm_is_undefined(self):
        assert angle_at_pivot((0, 0), (0, 0), (1, 0)) is None

    @given(
        ax=finite_coord, ay=finite_coord,
        px=finite_coord, py=finite_coord,
        cx=finite_coord, cy=finite_coord,
    )
    def test_mirror_invariance(self, ax, ay, px, py, cx, cy):
        # Unsigned angles survive reflecting all points across the y axis.
        original = angle_at_pivot((ax, ay), (px, py), (cx, cy))
        mirrored = angle_at_pivot((-ax, ay), (-px, py), (-cx, cy))
        if original is None:
            assert mirrored is None
        else:
            assert mirrored == pytest.approx(original, abs=1e-12)

    @given(seed=st.integers(0, 2**32 - 1))
    def test_agrees_with_arccos_oracle(self, seed):
        rng = np.random.default_rng(seed)
        a, p, c = rng.uniform(0, 1, (3, 2))
        got = angle_at_pivot(a, p, c)
        assert got == pytest.approx(acos_angle(a, p, c), abs=1e-9)
        assert 0.0 <= got <= math.pi


class TestDefaultJointSet:
    def test_nine_triplets_with_middle_pivot(self):
        assert len(DEFAULT_JOINT_TRIPLETS) == 9
        by_name = {t.name: t for t in DEFAULT_JOINT_TRIPLETS}
        rs = by_name["right_shoulder_joint"]
        assert (rs.a, rs.pivot, rs.c) == (_K.RIGHT_HIP, _K.RIGHT_SHOULDER, _K.RIGHT_ELBOW)
        waist = by_name["waist_joint"]
        assert (waist.a, waist.pivot, waist.c) == (_K.LEFT_SHOULDER, _K.LEFT_HIP, _K.LEFT_KNEE)

    def test_degenerate_triplet_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            JointTriplet("bad", _K.LEFT_SHOULDER, _K.LEFT_SHOULDER, _K.LEFT_ELBOW)

    def test_weights_must_be_nonnegative_with_positive_sum(self):
        with pytest.raises(ValueError):
            JointSet(weights=(0.0,) * 9)
        with pytest.raises(ValueError):
            JointSet(weights=(1.0,) * 8 + (-0.5,))
        with pytest.raises(ValueError):
            JointSet(weights=(1.0,) * 8)


class TestFrameAngles:
    # Hand-derived angles for the T-pose in conftest: arms horizontal and the
    # torso/legs vertical give exactly pi/2 at shoulders and hips, pi elsewhere.
    T_POSE_EXPECTED = (
        math.pi / 2, math.pi / 2, math.pi, math.pi,
        math.pi / 2, math.pi / 2, math.pi, math.pi, math.pi,
    )

    def test_t_pose_angles(self, t_pose):
        vec = frame_angles(t_pose)
        assert vec.valid_mask.all()
        np.testing.assert_allclose(vec.angles, self.T_POSE_EXPECTED, atol=1e-12)

    def test_t_pose_matches_manual_angle_calls(self, t_pose):
        vec = frame_angles(t_pose)
        for k, triplet in enumerate(DEFAULT_JOINT_TRIPLETS):
            manual = angle_at_pivot(
                t_pose.point(triplet.a), t_pose.point(triplet.pivot), t_pose.point(triplet.c)
            )
            assert vec.angles[k] == pytest.approx(manual, abs=1e-12)

    def test_low_confidence_keypoint_gates_its_joints(self):
        frame = make_frame(T_POSE_POINTS, overrides={_K.LEFT_WRIST: 0.0})
        vec = frame_angles(frame, confidence_threshold=0.3)
        names = [t.name for t in DEFAULT_JOINT_TRIPLETS]
        invalid = {names[k] for k in range(9) if not vec.valid_mask[k]}
        assert invalid == {"left_elbow_joint"}

    def test_zero_threshold_keeps_everything(self):
        frame = make_frame(T_POSE_POINTS, overrides={_K.LEFT_WRIST: 0.0})
        vec = frame_angles(frame, confidence_threshold=0.0)
        assert vec.valid_mask.all()

    def test_degenerate_geometry_masks_angle(self):
        pts = dict(T_POSE_POINTS)
        pts[_K.LEFT_WRIST] = pts[_K.LEFT_ELBOW]  # zero-length forearm
        vec = frame_angles(make_frame(pts))
        names = [t.name for t in DEFAULT_JOINT_TRIPLETS]
        assert not vec.valid_mask[names.index("left_elbow_joint")]


class TestAngleMae:
    def test_identity_is_zero(self, t_pose):
        assert angle_mae(t_pose, t_pose, MetricConfig()) == 0.0

    def test_similarity_transform_invariance(self, t_pose):
        # rotate 30 degrees about the centroid, translate, then scale
        arr = t_pose.to_array()
        centroid = arr[:, :2].mean(axis=0)
        theta = math.radians(30.0)
        rot = np.array(
            [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
        )
        arr[:, :2] = ((arr[:, :2] - centroid) @ rot.T + centroid + (0.2, -0.1)) * 1.7
        moved = PoseFrame.from_array(arr)
        assert angle_mae(t_pose, moved, MetricConfig()) < 1e-9

    def test_t_pose_vs_arms_down_matches_oracle(self, t_pose, arms_down):
        diffs = []
        for triplet in DEFAULT_JOINT_TRIPLETS:
            a1 = acos_angle(
                t_pose.point(triplet.a), t_pose.point(triplet.pivot), t_pose.point(triplet.c)
            )
            a2 = acos_angle(
                arms_down.point(triplet.a),
                arms_down.point(triplet.pivot),
                arms_down.point(triplet.c),
            )
            diffs.append(abs(a1 - a2))
        expected = sum(diffs) / 9.0
        got = angle_mae(t_pose, arms_down, MetricConfig())
        assert got == pytest.approx(expected, abs=1e-9)
        # both arms move from horizontal to vertical: the mean shifts by pi/9
        assert got == pytest.approx(math.pi / 9, abs=1e-12)

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=50)
    def test_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        a = random_valid_frame(rng)
        b = random_valid_frame(rng)
        config = MetricConfig()
        assert angle_mae(a, b, config) == angle_mae(b, a, config)

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=50)
    def test_range_and_identity(self, seed):
        rng = np.random.default_rng(seed)
        a = random_valid_frame(rng)
        b = random_valid_frame(rng)
        config = MetricConfig()
        assert angle_mae(a, a, config) == 0.0
        assert 0.0 <= angle_mae(a, b, config) <= math.pi

    def test_doubling_weights_changes_nothing(self, t_pose, arms_down):
        base = MetricConfig()
        doubled = MetricConfig(joint_set=JointSet(weights=(2.0,) * 9))
        assert angle_mae(t_pose, arms_down, base) == angle_mae(t_pose, arms_down, doubled)

    def test_weights_renormalize_over_valid_subset(self, t_pose, arms_down):
        # Zero out everything except the two shoulder joints: mean is pi/2.
        weights = (1.0, 1.0) + (0.0,) * 7
        config = MetricConfig(joint_set=JointSet(weights=weights))
        assert angle_mae(t_pose, arms_down, config) == pytest.approx(math.pi / 2)

    def test_no_jointly_valid_joints_raises(self):
        left_only = {k: 1.0 if "LEFT" in k.name or k == _K.NOSE else 0.0 for k in _K}
        right_only = {k: 1.0 if "RIGHT" in k.name or k == _K.NOSE else 0.0 for k in _K}
        a = make_frame(T_POSE_POINTS, overrides=left_only, confidence=0.0)
        b = make_frame(T_POSE_POINTS, overrides=right_only, confidence=0.0)
        with pytest.raises(IncomparableFramesError):
            angle_mae(a, b, MetricConfig())

    def test_wrong_metric_kind_rejected(self, t_pose):
        with pytest.raises(ValueError, match="metric_kind"):
            angle_mae(t_pose, t_pose, MetricConfig(metric_kind="keypoint_mae"))


class TestKeypointMae:
    def test_identity_is_zero(self, t_pose):
        config = MetricConfig(metric_kind="keypoint_mae")
        assert keypoint_mae(t_pose, t_pose, config) == 0.0

    def test_pure_translation_without_normalization(self, t_pose):
        moved = transform_frame(t_pose, 0.0, (0.3, 0.0), 1.0)
        config = MetricConfig(metric_kind="keypoint_mae")
        assert keypoint_mae(t_pose, moved, config) == pytest.approx(0.3, abs=1e-12)

    def test_translation_removed_by_bounding_box(self, t_pose):
        moved = transform_frame(t_pose, 0.0, (0.3, 0.0), 1.0)
        config = MetricConfig(metric_kind="keypoint_mae", normalization="bounding_box")
        assert keypoint_mae(t_pose, moved, config) < 1e-9

    def test_scale_removed_by_bounding_box(self, t_pose):
        scaled = transform_frame(t_pose, 0.0, (0.05, 0.02), 2.5)
        config = MetricConfig(metric_kind="keypoint_mae", normalization="bounding_box")
        assert keypoint_mae(t_pose, scaled, config) < 1e-9

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=50)
    def test_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        a = random_valid_frame(rng)
        b = random_valid_frame(rng)
        config = MetricConfig(metric_kind="keypoint_mae")
        assert keypoint_mae(a, b, config) == keypoint_mae(b, a, config)
        assert keypoint_mae(a, b, config) >= 0.0

    def test_degenerate_bounding_box_raises(self):
        pts = {k: (0.5, 0.5) for k in _K}
        frame = make_frame(pts)
        config = MetricConfig(metric_kind="keypoint_mae", normalization="bounding_box")
        with pytest.raises(DegenerateBoundingBoxError):
            keypoint_mae(frame, frame, config)

    def test_no_jointly_valid_keypoints_raises(self, t_pose):
        silent = make_frame(T_POSE_POINTS, confidence=0.0)
        config = MetricConfig(metric_kind="keypoint_mae")
        with pytest.raises(IncomparableFramesError):
            keypoint_mae(t_pose, silent, config)


class TestMetricConfig:
    def test_threshold_must_be_in_unit_interval(self):
        with pytest.raises(ValueError):
            MetricConfig(confidence_threshold=1.5)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            MetricConfig(metric_kind="cosine")

    def test_unknown_normalization_rejected(self):
        with pytest.raises(ValueError):
            MetricConfig(normalization="z_score")

    def test_dict_round_trip(self):
        config = MetricConfig(
            metric_kind="keypoint_mae",
            keypoint_weights=tuple([2.0] * 5 + [1.0] * 12),
            confidence_threshold=0.25,
            normalization="bounding_box",
        )
        again = MetricConfig.from_dict(config.to_dict())
        assert again == config

    def test_from_partial_dict_uses_defaults(self):
        config = MetricConfig.from_dict({"confidence_threshold": 0.2})
        assert config.metric_kind == "angle_mae"
        assert config.confidence_threshold == 0.2
