"""Extractor exception types."""


class ExtractorError(Exception):
    """Base class for extractor failures."""


class UnreadableVideoError(ExtractorError):
    """The video file cannot be opened or decoded."""


class NoPersonDetectedError(ExtractorError):
    """No frame of the video produced a person detection."""


class ModelLoadError(ExtractorError):
    """A pose or detection model could not be constructed or loaded."""


class AlignmentMismatchError(ExtractorError):
    """An alignment file refers to frames the given videos do not have."""
