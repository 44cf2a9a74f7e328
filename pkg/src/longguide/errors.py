"""Exception types shared across the pipeline."""


class LongGuideError(Exception):
    """Base class for pipeline failures."""


class ParseError(LongGuideError):
    """A model response could not be parsed into the expected structure."""


class DatasetError(LongGuideError):
    """A dataset or outputs file is missing, malformed, or empty."""


class BackendError(LongGuideError):
    """A generation backend failed."""


class ScriptUnderrunError(BackendError):
    """The scripted mock ran out of canned responses."""


class TransportError(BackendError):
    """A live request failed after exhausting retries."""
