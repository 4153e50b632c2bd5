"""Exception hierarchy.

Every error raised on bad input derives from :class:`InputError` and every
error caused by a size cap derives from :class:`ResourceLimit`; the CLI maps
these onto exit codes 2 and 3.
"""


class VarcountError(Exception):
    """Base class for all errors raised by this package."""


class InputError(VarcountError, ValueError):
    pass


class ResourceLimit(VarcountError):
    pass


class CapExceeded(ResourceLimit):
    pass


class StructureViolation(VarcountError):
    """An internal invariant failed; indicates a bug, not bad input."""


# field
class NotPrime(InputError):
    pass


class EvenCharacteristic(InputError):
    pass


class ReducibleModulus(InputError):
    pass


class DegreeMismatch(InputError):
    pass


class FieldTooLarge(InputError):
    pass


class FieldMismatch(InputError):
    pass


class DivisionByZero(InputError, ZeroDivisionError):
    pass


class NotPrimitive(InputError):
    pass


# intlinalg / congruence
class DimensionMismatch(InputError):
    pass


class ZeroMatrix(InputError):
    pass


# variety
class ZeroCoefficient(InputError):
    pass


class NonPositiveExponent(InputError):
    pass


class BlockShapeViolation(InputError):
    pass


class NonIncreasingBlocks(InputError):
    pass


class LevelOutOfRange(InputError, IndexError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


# parser
class ParseError(InputError):
    """Malformed system text. Carries a 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class VsysSyntaxError(ParseError):
    pass


class InconsistentStructure(ParseError):
    pass


class UnknownVariable(ParseError):
    pass


class ConstantOutOfField(ParseError):
    pass


class ParsedBlockShapeViolation(ParseError, BlockShapeViolation):
    pass
