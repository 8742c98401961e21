"""Exception types shared across gvkit."""


class GVKitError(Exception):
    """Base class for all gvkit errors."""


class UsageError(GVKitError, ValueError):
    """Arguments violate a documented precondition (shape, range, parity)."""


class DomainError(GVKitError, ValueError):
    """A mathematically undefined request, e.g. inverting zero."""


class ResourceCapError(GVKitError, RuntimeError):
    """An exact enumeration would exceed the desk-scale cap."""
