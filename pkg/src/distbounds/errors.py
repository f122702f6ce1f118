"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid arguments or configuration."""


class ResourceError(RuntimeError):
    """A computation would exceed a configured size guard."""


class DomainError(ValueError):
    """A quantity is undefined for the given inputs (e.g. a zero-mass conditioning set)."""
