"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter violates the validity hypothesis of the requested quantity.

    The message names the violated constraint, e.g. ``requires d > -2k+4``.
    """


class ResourceError(RuntimeError):
    """A requested computation exceeds the configured size budget."""


class ConvergenceError(RuntimeError):
    """An iterative solve failed to reach the requested tolerance."""
