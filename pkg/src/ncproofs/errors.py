"""Exception hierarchy shared by the algebra, proof and front-end layers."""

from __future__ import annotations


class NCProofError(Exception):
    """Base class for every error raised by ncproofs."""


class UsageError(NCProofError, ValueError):
    """An operation was called with arguments outside its contract."""


class ParseError(UsageError):
    """Text could not be parsed as a polynomial, order or statement.

    Attributes:
        position: 0-based column of the offending character, if known.
    """

    def __init__(self, message: str, position: int | None = None) -> None:
        """Initialise with a message and an optional source position."""
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class SortError(UsageError):
    """An operator term or statement is not well-sorted."""


class QuiverError(NCProofError):
    """A polynomial does not respect the domains/codomains of a quiver."""


class ProblemFileError(NCProofError):
    """A problem file or certificate document is malformed."""
