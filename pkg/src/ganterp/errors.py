"""Exception hierarchy for the ganterp pipeline.

Every stage raises a subclass of GanterpError (plus the builtin
FileNotFoundError for missing inputs), so the CLI can map each failure
class to a distinct exit code.
"""


class GanterpError(Exception):
    """Base class for all pipeline errors."""


class UnsupportedFormatError(GanterpError):
    """Audio file is not a WAV we can decode (bad container, codec or depth)."""


class EmptyAudioError(GanterpError):
    """WAV file contains zero sample frames."""


class AudioTooShortError(GanterpError):
    """Audio shorter than one analysis window, or yields fewer than 2 slices."""


class InvalidCategoryError(GanterpError):
    """A category id falls outside [0, num_classes)."""


class KeyframeIndexError(GanterpError):
    """A pinned category refers to a keyframe ordinal that does not exist."""


class MisalignedInputsError(GanterpError):
    """Keyframe list and alpha-track segment bounds do not line up."""


class DimensionMismatchError(GanterpError):
    """Latent vector or class weights do not match the generator spec."""


class BackendUnavailableError(GanterpError):
    """Generator backend could not start, crashed, or broke its contract."""


class MalformedTrajectoryError(GanterpError):
    """Trajectory file violates the schema.

    `field` holds the path of the offending field, e.g. "frames[3].class_weights".
    """

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class VersionMismatchError(GanterpError):
    """Trajectory file declares an unknown format_version."""


class RenderIoError(GanterpError):
    """Writing frame files failed.

    `written` lists the frame paths completed before the failure so callers
    can report partial output.
    """

    def __init__(self, message: str, written=()):
        self.written = list(written)
        super().__init__(message)


class EncoderFailedError(GanterpError):
    """External video encoder exited non-zero."""
