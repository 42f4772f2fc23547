"""Exception types shared across the package."""


class DomainError(ValueError):
    """An element, table, or parameter is outside the object's domain."""


class PreconditionError(ValueError):
    """An operation was called on inputs that violate its stated precondition."""


class CapabilityError(RuntimeError):
    """The requested computation exceeds the configured enumeration ceiling."""

    def __init__(self, message, partial_lower_bound=None):
        super().__init__(message)
        self.partial_lower_bound = partial_lower_bound


class ProtocolError(RuntimeError):
    """An adversary or challenger broke its interaction contract (e.g. query budget)."""
