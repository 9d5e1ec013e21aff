"""poseextract: video-to-keypoints extraction and synchronized rendering.

Turns a single-person video into the keypoint-sequence JSON format consumed
by the core alignment package, and renders aligned video pairs side by side.
"""

from .backends import (
    BACKEND_NAMES,
    MARKER_COLORS,
    KeypointRcnnBackend,
    MarkerBackend,
    PoseBackend,
    create_backend,
)
from .errors import (
    AlignmentMismatchError,
    ExtractorError,
    ModelLoadError,
    NoPersonDetectedError,
    UnreadableVideoError,
)
from .extract import CROPPERS, ExtractorConfig, extract
from .markers import draw_marker_frame, write_marker_clip
from .render import load_representatives, render_side_by_side
from .schema import FORMAT_VERSION, KEYPOINT_ORDER, NUM_KEYPOINTS, write_sequence_json

__version__ = "0.1.0"

__all__ = [
    "AlignmentMismatchError",
    "BACKEND_NAMES",
    "CROPPERS",
    "ExtractorConfig",
    "ExtractorError",
    "FORMAT_VERSION",
    "KEYPOINT_ORDER",
    "KeypointRcnnBackend",
    "MARKER_COLORS",
    "MarkerBackend",
    "ModelLoadError",
    "NUM_KEYPOINTS",
    "NoPersonDetectedError",
    "PoseBackend",
    "UnreadableVideoError",
    "create_backend",
    "draw_marker_frame",
    "extract",
    "load_representatives",
    "render_side_by_side",
    "write_marker_clip",
    "write_sequence_json",
    "__version__",
]
