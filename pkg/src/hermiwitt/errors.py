"""Exception hierarchy shared by all modules."""


class HermiwittError(Exception):
    """Base class for all library errors."""


class PrecisionExhausted(HermiwittError):
    """A result would be known to absolute precision <= 0 digits."""


class IndistinguishableZero(HermiwittError):
    """A valuation/classification was requested on an element that is
    indistinguishable from zero at its tracked precision."""


class DivisionByIndistinguishableZero(IndistinguishableZero):
    pass


class WrongBase(HermiwittError):
    pass


class NotASquare(HermiwittError):
    pass


class WrongSymmetryType(HermiwittError):
    pass


class EpsilonMismatch(HermiwittError):
    pass


class DegenerateForm(HermiwittError):
    pass


class OracleInconclusive(HermiwittError):
    """Raised when a decision procedure cannot certify its verdict within
    the precision budget.  Never a silent guess."""


class NotSelfAdjoint(HermiwittError):
    pass


class NotSkewAdjoint(HermiwittError):
    pass


class Singular(HermiwittError):
    pass


class NotQuadratic(HermiwittError):
    pass


class NotInD(HermiwittError):
    pass


class NoSimilitudeFound(HermiwittError):
    """Similitude search budget exhausted (a precision/budget error, not a
    mathematical verdict)."""


class InvalidParameter(HermiwittError):
    pass


class InfeasibleLift(HermiwittError):
    pass


class IncomparableTokens(HermiwittError):
    pass
