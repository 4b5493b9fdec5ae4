"""Exception types shared across the package."""


class Char2Error(Exception):
    """Base class for all library errors."""


class FieldMismatch(Char2Error):
    """Operands live in different fields."""


class DivisionByZero(Char2Error, ZeroDivisionError):
    pass


class NotASquare(Char2Error):
    pass


class ZeroElement(Char2Error):
    pass


class ParseError(Char2Error, ValueError):
    pass


class DimensionMismatch(Char2Error):
    pass


class AlternatingForm(Char2Error):
    """Raised when a nonalternating form was required."""


class DegenerateForm(Char2Error):
    pass


class IsotropicVector(Char2Error):
    pass


class WrongDimension(Char2Error):
    pass


class NotInvolution(Char2Error):
    pass


class MixedDecomposition(Char2Error):
    """A Wiitala decomposition came out impure; this is an invariant violation."""


class DimensionBudgetExceeded(Char2Error):
    pass


class NotSplit(Char2Error):
    pass


class NotInterchange(Char2Error):
    pass


class ZeroParameter(Char2Error):
    pass


class ZeroAlpha(Char2Error):
    pass


class SymplecticInvolution(Char2Error):
    pass


class NoInvertibleAlternating(Char2Error):
    pass


class NotSimpleError(Char2Error):
    pass


class NotSplitCertified(Char2Error):
    pass


class MixedFields(Char2Error):
    pass


class BudgetExceeded(Char2Error):
    pass
