"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input does not satisfy the structural requirements of an operation."""


class DomainError(ValueError):
    """Input is well-formed but outside the domain where a quantity is defined."""


class DegenerateStateError(DomainError):
    """Purity (or another normalizer) is too small to divide by."""
