"""Exception types shared across the package."""


class DecmapError(Exception):
    """Base class for all package errors."""


class ShapeError(DecmapError, ValueError):
    """Matrix input has the wrong shape or violates a symmetry requirement."""


class ValidationError(DecmapError, ValueError):
    """A constructed object violates one of its stated invariants."""


class DomainError(DecmapError, ValueError):
    """An operation was applied to the wrong kind of system or map."""


class PreconditionError(DecmapError, ValueError):
    """An operation's stated precondition does not hold for the given input."""


class UnsupportedDomainError(DecmapError, ValueError):
    """The operation needs a full-algebra domain; use the extension SDP route instead."""


class SolverIndeterminate(DecmapError, RuntimeError):
    """The SDP engine could not certify an answer at the requested tolerance.

    Carries the solver residuals so callers can report them.
    """

    def __init__(self, message: str, residuals=None):
        super().__init__(message)
        self.residuals = residuals or {}
