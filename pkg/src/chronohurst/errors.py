"""Exception hierarchy shared by every chronohurst module."""

from __future__ import annotations


class ChronoHurstError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ChronoHurstError, ValueError):
    """A CSV input could not be parsed.

    ``line`` is the 1-based line number of the offending row (0 when the
    problem is not tied to a single line).
    """

    kind = "parse"

    def __init__(self, message: str, line: int = 0) -> None:
        self.line = line
        prefix = f"line {line}: " if line else ""
        super().__init__(prefix + message)


class MalformedDateError(ParseError):
    kind = "malformed-date"


class NonIntegerValueError(ParseError):
    kind = "non-integer-value"


class CalendarGapError(ParseError):
    kind = "calendar-gap"


class DuplicateMonthError(ParseError):
    kind = "duplicate-month"


class EmptyBodyError(ParseError):
    kind = "empty-body"


class HeaderError(ParseError):
    kind = "bad-header"


class InsufficientDataError(ChronoHurstError, ValueError):
    """The input is too short for the requested operation."""


class DegenerateSampleError(ChronoHurstError, ValueError):
    """The input has zero variance (or zero robust dispersion)."""


ZeroVarianceError = DegenerateSampleError


class UnsupportedConfigurationError(ChronoHurstError, ValueError):
    """Arguments are individually valid but cannot be combined."""


class WrongFixtureError(ChronoHurstError, ValueError):
    """A series does not match the bundled fixture it claims to be."""


class UnsupportedSizeError(ChronoHurstError, ValueError):
    """Requested synthesis length is not supported."""


class SynthesisError(ChronoHurstError, RuntimeError):
    """Circulant embedding produced a negative eigenvalue."""


class NoTransitionError(ChronoHurstError, ValueError):
    """A CHE curve shows no S-shaped transition worth segmenting."""
