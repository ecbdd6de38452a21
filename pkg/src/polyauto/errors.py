"""Exception hierarchy shared by every polyauto module."""


class PolyAutoError(Exception):
    """Base class for all library errors."""


class RingMismatch(PolyAutoError):
    pass


class ArityMismatch(PolyAutoError):
    pass


class ExponentOverflow(PolyAutoError):
    pass


class IndexOutOfRange(PolyAutoError):
    pass


class NotInvertible(PolyAutoError):
    """A ring element has no multiplicative inverse."""


class NotSquare(PolyAutoError):
    pass


class MalformedNormalization(PolyAutoError):
    """A map is not of the form lambda_i*x_i + (terms of degree >= 2)."""


class DegenerateGenerator(PolyAutoError):
    """A generator would introduce constant or linear terms into the map."""


class ConditionViolated(PolyAutoError):
    pass


class ZeroDenominator(PolyAutoError):
    pass


class NonInvertibleLambda(PolyAutoError):
    pass


class TriangularityViolated(PolyAutoError):
    pass


class NonInvertibleLinearPart(PolyAutoError):
    pass


class NonzeroConstantPart(PolyAutoError):
    pass


class BadModulus(PolyAutoError):
    pass


class BadDimension(PolyAutoError):
    pass


class BlockLengthMismatch(PolyAutoError):
    pass


class MalformedCiphertext(PolyAutoError):
    pass


class MalformedDocument(PolyAutoError):
    pass


class UnknownVariable(PolyAutoError):
    pass


class PolySyntaxError(PolyAutoError):
    """Parse failure carrying a 1-based line and column."""

    def __init__(self, message, line=1, column=1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
