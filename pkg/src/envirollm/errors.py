"""Exception types shared across the toolkit."""


class EnvirollmError(Exception):
    """Base class for all envirollm errors."""


class ProcessEnumerationDenied(EnvirollmError):
    """The operating system refused to list running processes."""


class ProcessGone(EnvirollmError):
    """A target process exited (or became unreadable) between detection and sampling."""


class NonMonotonicSeries(EnvirollmError):
    """Power series timestamps are not strictly increasing."""


class EndpointUnreachable(EnvirollmError):
    """An inference endpoint could not be reached at all."""


class ModelNotFound(EnvirollmError):
    """The endpoint does not know the requested model."""


class InferenceTimeout(EnvirollmError):
    """A generation request exceeded the configured timeout."""


class MalformedResponse(EnvirollmError):
    """The endpoint answered, but the body is missing required fields."""


class JudgeUnavailable(EnvirollmError):
    """The judge endpoint is down or cannot serve the judge model."""


class UnparseableJudgeReply(EnvirollmError):
    """The judge replied, but no integer score in [0, 100] could be extracted."""


class StorageError(EnvirollmError):
    """A database or file operation failed.

    Carries the offending path so CLI and API layers can report it.
    """

    def __init__(self, message: str, path: str | None = None) -> None:
        super().__init__(message)
        self.path = path
