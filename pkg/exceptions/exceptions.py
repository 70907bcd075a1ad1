class WaringLabError(Exception):
    """
    Base class of the errors raised by the library.
    """


class FormatError(WaringLabError, ValueError):
    """
    Raised when a format string or a format record is malformed.
    """


class PreconditionError(WaringLabError, ValueError):
    """
    Raised when an operation is called outside of its stated hypotheses
    (e.g. a Horace bound or a schedule threshold is violated).
    """


class EmptySystemError(WaringLabError):
    """
    Raised when a linear system has no nonzero section.
    """


class HoraceConsistencyError(WaringLabError):
    """
    Raised when the three hypotheses of a Horace step hold but the direct
    computation of the conclusion disagrees.
    """
