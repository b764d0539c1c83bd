"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class DimensionError(ValueError):
    """Operands have incompatible dimensions."""


class PreconditionError(ValueError):
    """A documented precondition of an operation does not hold."""


class BudgetExceeded(ValueError):
    """An enumeration would exceed its size budget."""
