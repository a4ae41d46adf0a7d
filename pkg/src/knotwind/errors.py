"""Exception types shared across the package."""


class KnotwindError(Exception):
    """Base class for all package errors."""


class ValidationError(KnotwindError, ValueError):
    """An input violates a documented precondition."""


class InternalCheckError(KnotwindError, RuntimeError):
    """An internal consistency assertion failed; the result was discarded."""


class TruncationInstabilityError(InternalCheckError):
    """A homological value changed between truncation orders N and N+1."""
