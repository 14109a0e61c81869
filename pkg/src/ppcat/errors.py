"""Exception types raised across the package.

Two families: input validation problems (``ValidationError`` and subclasses,
CLI exit code 1) and numerical consistency failures (``NumericalError`` and
subclasses, CLI exit code 2).
"""


class ValidationError(ValueError):
    pass


class NumericalError(ArithmeticError):
    pass


class ZeroDivisor(ValidationError, ZeroDivisionError):
    pass


class InvalidStep(ValidationError):
    pass


class DegenerateExponents(NumericalError):
    pass


class IllConditionedPropagator(NumericalError):
    pass


class InsufficientBetaExtent(NumericalError):
    pass


class NonPositiveDefiniteForm(NumericalError):
    pass


class ImaginaryResidue(NumericalError):
    pass


class NoLobesFound(NumericalError):
    pass


class CutoffLeakage(NumericalError):
    def __init__(self, message, leakage=None, edges=(0.0, 0.0)):
        super().__init__(message)
        self.leakage = leakage
        self.edges = edges
