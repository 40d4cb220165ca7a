"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


class NumericalFailure(ArithmeticError):
    """Raised when an iteration fails to converge or a result is unphysical."""
