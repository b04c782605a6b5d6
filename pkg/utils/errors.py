"""Exception hierarchy shared by every stage of the pipeline."""


class LabelcheckError(Exception):
    """Base class for all errors raised by labelcheck."""

    exit_code = 2


class UsageError(LabelcheckError):
    """Bad command-line flag or configuration value."""

    exit_code = 1


class DataError(LabelcheckError):
    """Input data does not conform to the expected schema or vocabulary."""

    exit_code = 2


class MalformedRecord(DataError):
    pass


class InvalidEnum(DataError):
    """A field carries a value outside its closed enumeration."""

    def __init__(self, field: str, value, allowed=None):
        self.field = field
        self.value = value
        self.allowed = sorted(str(a) for a in allowed) if allowed else []
        msg = f"invalid value {value!r} for {field}"
        if self.allowed:
            msg += f" (expected one of: {', '.join(self.allowed)})"
        super().__init__(msg)


class UnknownDatatype(DataError):
    pass


class UnknownPurpose(DataError):
    pass


class UnknownCategory(DataError):
    pass


class MalformedAnnotationFile(DataError):
    pass


class UnknownTagClass(DataError):
    pass


class UnorderedSnapshots(DataError):
    pass


class MissingPermissionData(DataError):
    pass


class NoHost(DataError):
    pass


class UnparseableMarkup(DataError):
    pass


class UnsupportedFormat(DataError):
    pass


class Undetermined(LabelcheckError):
    """Language detection could not reach the confidence floor."""

    def __init__(self, best_guess: str | None, confidence: float):
        self.best_guess = best_guess
        self.confidence = confidence
        super().__init__(f"language undetermined (best guess {best_guess!r}, confidence {confidence:.3f})")


class BackendFailure(LabelcheckError):
    """An annotator backend raised while tagging a segment."""

    def __init__(self, backend: str, segment_index: int, cause: Exception):
        self.backend = backend
        self.segment_index = segment_index
        self.cause = cause
        super().__init__(f"backend {backend} failed on segment {segment_index}: {cause}")
