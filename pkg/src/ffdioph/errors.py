"""Exception hierarchy shared by every module."""


class FFDiophError(ArithmeticError):
    """Base class for all errors raised by ffdioph."""


class NotPrime(FFDiophError, ValueError):
    pass


class ReducibleModulus(FFDiophError, ValueError):
    pass


class DegreeMismatch(FFDiophError, ValueError):
    pass


class FieldMismatch(FFDiophError, ValueError):
    pass


class DivideByZero(FFDiophError, ZeroDivisionError):
    pass


class InsufficientPrecision(FFDiophError):
    """A result cannot be certified at the precision carried by the inputs."""


class NonConvergent(FFDiophError, ValueError):
    pass


class SingularBasis(FFDiophError, ValueError):
    pass


class DimensionMismatch(FFDiophError, ValueError):
    pass


class RepeatedPoint(FFDiophError, ValueError):
    pass


class WitnessTooWeak(FFDiophError, ValueError):
    pass


class ParseError(FFDiophError, ValueError):
    pass
