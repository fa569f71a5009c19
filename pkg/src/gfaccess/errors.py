"""Exception types raised across the package."""


class GfaccessError(Exception):
    """Base class for all package errors."""


# code construction / decoding
class NonPrimeModulus(GfaccessError, ValueError):
    pass


class FieldTooSmall(GfaccessError, ValueError):
    pass


class TooManyUsers(GfaccessError, ValueError):
    pass


class PhaseOutOfRange(GfaccessError, IndexError):
    pass


class LengthMismatch(GfaccessError, ValueError):
    pass


class NotDecomposable(GfaccessError):
    pass


class AmbiguousDecomposition(GfaccessError):
    pass


class UnassignedColumn(GfaccessError, KeyError):
    pass


# attack
class IndexOutOfRange(GfaccessError, IndexError):
    pass


class NotJammed(GfaccessError):
    pass


# detection
class DegenerateMatrixWarning(UserWarning):
    """Smallest eigenvalue vanished; the count fell back to absolute levels."""


class InsufficientTrials(GfaccessError, ValueError):
    pass


class UndecodableObservation(GfaccessError):
    pass


# channel
class BadProfile(GfaccessError, ValueError):
    pass


class DimensionMismatch(GfaccessError, ValueError):
    pass


class LambdaOutOfRange(GfaccessError, ValueError):
    pass


# reliability
class ConstraintViolated(GfaccessError, ValueError):
    pass


class QuadratureNonConvergent(GfaccessError, ArithmeticError):
    pass


class LatencyInfeasible(GfaccessError, ValueError):
    pass
