"""Exception hierarchy for the library."""


class UncorderError(Exception):
    """Base class for all library errors."""


class DomainError(UncorderError, ValueError):
    """An argument lies outside the operation's domain."""


class KindMismatchError(UncorderError, TypeError):
    """Operation queried on an incompatible distribution kind."""


class DegenerateIntervalError(UncorderError, ValueError):
    """Conditioning interval carries mass below the configured floor."""


class DisjointSupportError(UncorderError, ValueError):
    """Two functions compared on disjoint supports."""


class DataError(UncorderError, ValueError):
    """Numerically inconsistent tabulated input."""


class ParseError(UncorderError, ValueError):
    """Malformed text input; carries a line number where applicable."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
