"""
Exception hierarchy.

Every failure the library signals derives from CFLeapError so callers
(and the CLI) can map them to exit codes in one place.
"""


class CFLeapError(Exception):
    """Base class for all cfleap errors."""


class PoleError(CFLeapError, ZeroDivisionError):
    """Raised when a transform hits its pole (denominator zero)."""


class StreamExhausted(CFLeapError):
    """Raised when a finite quotient stream ends before a requested index."""


class ParseError(CFLeapError, ValueError):
    """Raised when the CF text notation cannot be parsed."""

    def __init__(self, message: str, position: int, expected: str = "") -> None:
        self.position = position
        self.expected = expected
        detail = f" (expected {expected})" if expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class NonIntegerCoefficient(CFLeapError, ValueError):
    """Raised when a coefficient expression divides with a remainder."""


class NonPositiveQuotient(CFLeapError, ValueError):
    """Raised when a partial quotient after a₀ is below 1."""


class StalledError(CFLeapError):
    """Raised when the streaming transform absorbs too long without emitting."""


class BadDeterminant(CFLeapError, ValueError):
    """Raised when a matrix has the wrong determinant for the operation."""


class ParityError(CFLeapError, ValueError):
    """Raised when quotients do not have the parity pattern of their class."""


class NotApplicable(CFLeapError):
    """Raised when the input does not meet the hypotheses of a tail or identity."""


class ClassMismatch(NotApplicable):
    """Raised when the input is not of the parity class a tail case needs."""


class ArityError(CFLeapError, ValueError):
    """Raised when a block identity receives the wrong number of quotients."""


class BranchRequired(CFLeapError):
    """Raised when a branch-dependent index is requested without a branch."""


class IndexOutOfRange(CFLeapError, IndexError):
    """Raised when an index function maps below the first quotient."""


class AlignmentError(CFLeapError):
    """Raised when the transformed stream cannot be aligned with its tail."""
