"""Exception hierarchy shared by all modules."""


class Worst1psError(Exception):
    """Base class for every error raised by this package."""


class EmptyGenerators(Worst1psError, ValueError):
    pass


class GcdNotOne(Worst1psError, ValueError):
    pass


class IndexOutOfRange(Worst1psError, IndexError):
    pass


class SingularMatrix(Worst1psError, ArithmeticError):
    pass


class NonSquareMinor(Worst1psError, ValueError):
    pass


class InconsistentPoints(Worst1psError, ValueError):
    """Sample points do not lie on a polynomial of the stated degree."""


class ZeroPolynomial(Worst1psError, ValueError):
    pass


class NTooSmall(Worst1psError, ValueError):
    pass


class NotConvex(Worst1psError, ValueError):
    pass


class Negative(Worst1psError, ValueError):
    pass


class ZeroVector(Worst1psError, ValueError):
    pass


class BadCornerIndex(Worst1psError, ValueError):
    pass


class SingularSystem(Worst1psError, ArithmeticError):
    pass


class WrongVariant(Worst1psError, ValueError):
    pass


class NotPersistent(Worst1psError, ValueError):
    pass


class NoOptimum(Worst1psError, RuntimeError):
    """The target lies in the cone, i.e. the point is not unstable."""


class TooLarge(Worst1psError, ValueError):
    pass


class DegreeBoundViolated(Worst1psError, AssertionError):
    pass


class PreconditionK(Worst1psError, ValueError):
    pass


class CornerAboveConductor(Worst1psError, ValueError):
    pass


class CapExceeded(Worst1psError, RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotYetValid(Worst1psError, ValueError):
    pass


class BadR(Worst1psError, ValueError):
    pass


class GcdTrivialCurve(Worst1psError, ValueError):
    """The semigroup is all of N, so the curve is smooth."""
