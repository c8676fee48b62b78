"""Exception hierarchy shared by all modules."""


class DirichletBallError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(DirichletBallError, ValueError):
    pass


class DegenerateDenominator(DirichletBallError, ZeroDivisionError):
    pass


class InvalidInput(DirichletBallError, ValueError):
    """Bad user-supplied parameters (maps to CLI exit code 2)."""


class NumericalFailure(DirichletBallError, ArithmeticError):
    """A computation could not reach its accuracy contract (CLI exit code 3)."""


class WeightOverflow(NumericalFailure):
    pass


class IllConditionedBasis(NumericalFailure):
    def __init__(self, message, degree_reached=None):
        super().__init__(message)
        self.degree_reached = degree_reached


class TruncationError(NumericalFailure):
    pass


class QuadratureError(NumericalFailure):
    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class NotAPeakFunction(DirichletBallError):
    pass


class DegenerateFit(NumericalFailure):
    pass


class ParseError(InvalidInput):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset
