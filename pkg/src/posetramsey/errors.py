"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class PosetRamseyError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(PosetRamseyError, ValueError):
    """Input violates a documented precondition (CLI exit code 2)."""


class ResourceLimitError(PosetRamseyError):
    """A search or enumeration would exceed its budget (CLI exit code 3).

    ``partial`` carries whatever was completed before stopping, e.g. the
    number of items already yielded by a stream.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotApplicableError(PosetRamseyError):
    """A construction's hypothesis does not hold for the given input."""


class UndecidedError(ResourceLimitError):
    """A Ramsey number could not be pinned down below the requested bound."""


class ValidationFailure(PosetRamseyError):
    """A produced witness failed its independent re-check (a bug, never expected)."""
