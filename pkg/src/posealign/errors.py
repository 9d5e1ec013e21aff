"""Exception types shared across the toolkit."""


class PoseAlignError(Exception):
    """Base class for all toolkit errors."""


class SchemaError(PoseAlignError):
    """A sequence file or in-memory sequence violates the interchange schema."""


class IncomparableFramesError(PoseAlignError):
    """Two frames share no jointly valid joints/keypoints under the metric config."""


class DegenerateBoundingBoxError(PoseAlignError):
    """A frame's pose bounding box is too small to normalize by."""


class IncomparableSequencesError(PoseAlignError):
    """Every frame pair of the two sequences is incomparable; no alignment is meaningful."""


class ScenarioError(PoseAlignError):
    """A perturbation scenario is malformed or incompatible with its input sequence."""
