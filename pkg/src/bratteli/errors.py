"""Exception types shared across the package."""

from __future__ import annotations


class BratteliError(ValueError):
    """Base class for all domain errors raised by this package."""


class InsufficientPrefixError(BratteliError):
    """A computation needs more levels than the given prefix provides."""


class InvalidPrefixError(BratteliError):
    """An operation received a prefix that fails validation.

    Carries the validation issues so callers can report them.
    """

    def __init__(self, issues):
        self.issues = list(issues)
        detail = "; ".join(str(i) for i in self.issues)
        super().__init__(f"invalid diagram prefix: {detail}")


class FormatError(BratteliError):
    """Malformed or unrecognized file content."""
