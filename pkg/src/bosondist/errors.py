"""Exception hierarchy shared by the library and the command-line tool."""


class BosonDistError(Exception):
    """Base class for all library errors."""


class DimensionError(BosonDistError, ValueError):
    """Array shapes or lengths do not match what an operation needs."""


class SizeLimitError(BosonDistError, ValueError):
    """A problem size exceeds the practical limit of the requested route."""


class DomainError(BosonDistError, ValueError):
    """A scalar argument lies outside the mathematical domain."""


class UnitarityError(BosonDistError, ValueError):
    """A matrix failed the unitarity check.

    The max-norm residual ``|U^dagger U - I|`` is kept on ``residual``.
    """

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class NumericRangeError(BosonDistError, ArithmeticError):
    """A quantity under- or overflowed double precision."""


class GridSpanWarning(UserWarning):
    """A discretisation grid is too narrow for the kernel it samples."""
