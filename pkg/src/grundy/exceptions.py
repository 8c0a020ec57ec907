"""Exception hierarchy shared by every grundy module."""


class GrundyError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInstanceError(GrundyError, ValueError):
    pass


class DuplicateEdgeError(InvalidInstanceError):
    pass


class SelfLoopError(InvalidInstanceError):
    pass


class IsolatedOutsideCError(InvalidInstanceError):
    """A vertex outside the closed set has no neighbour, so N<v> would be empty."""


class IndexOutOfRangeError(GrundyError, IndexError):
    pass


class BadParametersError(GrundyError, ValueError):
    pass


class NotLegalError(GrundyError, ValueError):
    pass


class NoLegalPrefixError(GrundyError):
    pass


class TooLargeError(GrundyError, ValueError):
    pass


class TooLongError(GrundyError, ValueError):
    pass


class HypothesisViolatedError(GrundyError, ValueError):
    pass


class DimensionMismatchError(GrundyError, ValueError):
    pass


class AllMovesForbiddenError(GrundyError):
    pass


class ParseError(GrundyError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class BackendError(GrundyError, RuntimeError):
    pass


class BackendTimeoutError(BackendError):
    pass
