"""Exceptions shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain where a formula is valid."""


class CapExceededError(RuntimeError):
    """An enumeration or closure exceeded its configured size cap."""


class DecompositionError(RuntimeError):
    """A block decomposition could not be computed or validated."""
