"""Exception types raised across the package."""


class FracGroundError(Exception):
    """Base class for all package errors."""


class DomainError(FracGroundError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class GridMismatchError(FracGroundError, ValueError):
    pass


class UnsupportedVariantError(FracGroundError, ValueError):
    pass


class NoRootError(FracGroundError, ArithmeticError):
    """A scaling equation has no bracketable positive root."""


class ThresholdError(FracGroundError, ValueError):
    """The speed ``c`` is not below the existence threshold ``c0``."""

    def __init__(self, message, c=None, c0=None):
        super().__init__(message)
        self.c = c
        self.c0 = c0


class TrivialityError(FracGroundError, ValueError):
    """Requested a ground state for a problem whose only solution is zero."""


class StationarityError(FracGroundError, ArithmeticError):
    pass


class DivergenceError(FracGroundError, ArithmeticError):
    pass


class ShapeError(FracGroundError, ValueError):
    """A field does not have the shape required by an inequality check."""


class PositivityViolation(FracGroundError, ArithmeticError):
    pass


class AuditFailure(FracGroundError, AssertionError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
