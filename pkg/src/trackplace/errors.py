"""Exception types shared across the package."""


class TrackplaceError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TrackplaceError, ValueError):
    """An input violates an operation's domain contract."""


class CapacityError(TrackplaceError, ValueError):
    """An instance exceeds a configured size bound."""


class TraceParseError(TrackplaceError, ValueError):
    """Malformed trace input.

    Carries the 1-based line number of the offending input line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UsageError(TrackplaceError, ValueError):
    """An invalid request to the run harness or command line."""


class InvariantViolation(TrackplaceError, RuntimeError):
    """An internal cross-check failed; results cannot be trusted."""
