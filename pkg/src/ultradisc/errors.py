"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` (the class name) so the
CLI can surface it in reports without string matching.
"""


class UltradiscError(Exception):
    """Base class for all library errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class FieldMismatch(UltradiscError):
    pass


class DivisionByZero(UltradiscError, ZeroDivisionError):
    pass


class PrecisionExhausted(UltradiscError):
    pass


class ParseError(UltradiscError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class NonInvertibleDenominator(ParseError):
    pass


class NonUnitLinearCoefficient(UltradiscError):
    pass


class OutsideConvergenceDisc(UltradiscError):
    pass


class NoTailModel(UltradiscError):
    pass


class NotAPolynomial(UltradiscError):
    pass


class UndeterminedTail(UltradiscError):
    pass


class IndifferentMultiplier(UltradiscError):
    pass


class WrongRegime(UltradiscError):
    pass


class InsufficientTailInformation(UltradiscError):
    pass


class TooLarge(UltradiscError):
    pass


class NonIntegralCoefficients(UltradiscError):
    pass


class SandwichViolation(UltradiscError):
    """Radii failed the injectivity sandwich; indicates a bug or bad input."""


class SchemaError(UltradiscError):
    def __init__(self, message: str, path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")
