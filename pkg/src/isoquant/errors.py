"""Exception hierarchy shared across the package."""


class IsoquantError(Exception):
    """Base class for every error raised by this package."""


class DomainError(IsoquantError, ValueError):
    """An argument lies outside the open positive orthant or violates a parameter bound."""


class NotDifferentiable(IsoquantError):
    """The technology has no gradient at the requested bundle."""


class ComputationError(IsoquantError):
    """A numerical procedure could not produce a result."""


class Unattainable(ComputationError):
    """The requested output level cannot be reached on the search bracket."""


class NoInteriorMinimum(ComputationError):
    """Cost along the isoquant is monotone over the whole search bracket."""


class NoRoot(ComputationError):
    """A monotone root search failed to bracket a sign change."""
