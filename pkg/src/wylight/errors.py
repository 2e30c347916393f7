"""Exception types raised across the package."""


class WylightError(Exception):
    """Base class for all package errors."""


class MalformedInput(WylightError, ValueError):
    """A transaction or label file could not be parsed."""

    def __init__(self, message, *, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class MalformedMatrix(MalformedInput):
    """A permutation-matrix file has the wrong shape or content."""


class DegenerateLabels(WylightError, ValueError):
    """The label vector has no minority class (all labels equal)."""


class Exhausted(WylightError):
    """The threshold sequence has no smaller value left."""


class LimitsExceeded(WylightError, ValueError):
    """An instance is too large for exhaustive enumeration."""
