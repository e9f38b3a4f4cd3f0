"""Exception hierarchy.

Every error raised on purpose by the package derives from ``DetRepError``.
The CLI maps the three families below to exit codes:

* ``NoRepresentationError`` -- the input provably has no representation (2)
* ``NotHyperbolicError`` -- a restriction has non-real roots (3)
* ``NumericalFailure`` -- the numerics gave up; try another tolerance (4)
"""


class DetRepError(Exception):
    """Base class for all package errors."""


class DimensionError(DetRepError, ValueError):
    pass


class SymmetryError(DetRepError, ValueError):
    pass


class NotPSDError(DetRepError, ValueError):
    pass


class NormalizationError(DetRepError, ValueError):
    pass


class NotRealError(DetRepError, ValueError):
    pass


class DegenerateInputError(DetRepError, ValueError):
    pass


class HomogeneityError(DetRepError, ValueError):
    pass


class SizeCapError(DetRepError, ValueError):
    pass


class ScopeError(DetRepError, ValueError):
    """Input outside the supported degrees, arities or problem sizes."""


class StrategyError(DetRepError, ValueError):
    pass


class PredicateError(DetRepError, ValueError):
    pass


class PolynomialSyntaxError(DetRepError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownVariableError(PolynomialSyntaxError):
    pass


class NoRepresentationError(DetRepError):
    """No monic representation exists (certified by a criterion)."""

    def __init__(self, message, **details):
        self.details = details
        super().__init__(message)


class NotRepresentableError(NoRepresentationError):
    pass


class SelectionError(NoRepresentationError):
    pass


class NotHyperbolicError(DetRepError):
    pass


class NumericalFailure(DetRepError):
    pass


class ConvergenceError(NumericalFailure):
    pass


class DegenerateNumericsError(NumericalFailure):
    pass


class TrackingFailure(NumericalFailure):
    def __init__(self, message, stats=None):
        self.stats = stats
        super().__init__(message)
