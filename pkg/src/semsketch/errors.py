"""Error taxonomy shared across the package.

Every exception carries a stable ``code`` string; the CLI maps codes to
exit codes and the HTTP service puts them into JSON error bodies.
"""


class SemSketchError(Exception):
    """Base class for all domain errors."""

    code = "E_INTERNAL"


class UnknownClassError(SemSketchError):
    code = "E_UNKNOWN_CLASS"


class FormatError(SemSketchError):
    code = "E_FORMAT"


class DuplicateSentenceError(SemSketchError):
    code = "E_DUP_SENT"


class NotFoundError(SemSketchError):
    code = "E_NOT_FOUND"


class BelowThresholdError(SemSketchError):
    code = "E_BELOW_THRESHOLD"

    def __init__(self, message: str, actual: int, required: int):
        super().__init__(message)
        self.actual = actual
        self.required = required


class DomainError(SemSketchError):
    code = "E_DOMAIN"


class EmptySketchError(SemSketchError):
    code = "E_EMPTY"


class EmptyClassError(SemSketchError):
    code = "E_EMPTY_CLASS"


class VersionError(SemSketchError):
    code = "E_VERSION"


class ChecksumError(SemSketchError):
    code = "E_CHECKSUM"


class StoreIOError(SemSketchError):
    code = "E_IO"
