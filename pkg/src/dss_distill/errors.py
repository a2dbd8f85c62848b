"""Exception hierarchy.

Every error raised deliberately by the package derives from
:class:`DistillError`, so callers can catch one type. The CLI maps the
families below onto its exit statuses.
"""


class DistillError(Exception):
    """Base class for all package errors."""


class PreconditionError(DistillError, ValueError):
    """An operation was called with inputs violating its precondition."""


class ValidationError(PreconditionError):
    """A matrix failed validation as a bipartite density matrix.

    ``location`` is an optional ``(row, col)`` pair pointing at the worst
    offending entry.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class DimensionMismatchError(ValidationError):
    pass


class NotHermitianError(ValidationError):
    pass


class TraceError(ValidationError):
    pass


class NegativeEigenvalueError(ValidationError):
    pass


class NonFiniteError(ValidationError):
    pass


class ResourceError(DistillError):
    """A configured cap (dimension or enumeration budget) would be exceeded."""

    def __init__(self, message, required, cap):
        super().__init__(message)
        self.required = required
        self.cap = cap


class DomainError(DistillError, ValueError):
    """The input lies outside the domain an operation supports (e.g. not 2x2)."""


class NotEntangledError(DomainError):
    pass


class InconsistencyError(DistillError):
    """An internal consistency check failed; indicates a bug, not bad input."""
