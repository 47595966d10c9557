"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidityError(DomainError):
    """An argument lies outside the range where a physical model holds."""


class OutOfRangeError(DomainError):
    """A lookup fell outside the bounds of a tabulated grid."""


class DataError(ValueError):
    """An ingested data file is malformed."""


class SingularityError(ArithmeticError):
    """A closed-form expression was evaluated at (or numerically on) a pole."""

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context


class NumericalError(ArithmeticError):
    """An iterative or adaptive numerical method failed to converge."""


class UnderflowWarning(RuntimeWarning):
    """A result underflowed to zero in double precision."""
