"""Exception hierarchy shared by every module.

All errors derive from :class:`ModpError` so that the command line front end
can tell mathematical failures from usage errors.
"""


class ModpError(Exception):
    """Base class for every error raised by this package."""


# finite fields
class NotPrime(ModpError, ValueError):
    pass


class DegreeOutOfRange(ModpError, ValueError):
    pass


class DivisionByZero(ModpError, ZeroDivisionError):
    pass


class FieldMismatch(ModpError, TypeError):
    pass


# series
class DomainMismatch(ModpError, TypeError):
    pass


class CharacteristicMismatch(ModpError, ValueError):
    pass


class NotPIntegral(ModpError, ArithmeticError):
    """A rational coefficient has a denominator divisible by p."""


# characters
class NoEmbedding(ModpError, ValueError):
    pass


# spaces
class ParityMismatch(ModpError, ValueError):
    pass


class NotModular(ModpError, ValueError):
    pass


class UnsupportedCharacteristic(ModpError, ValueError):
    pass


class NotComputable(ModpError, ValueError):
    pass


class PrecisionTooLow(ModpError, ValueError):
    pass


class NotInSpan(ModpError, ArithmeticError):
    """Internal consistency failure: a Hecke image left the space."""


class NotDiagonalizable(ModpError, ArithmeticError):
    def __init__(self, message, eigenvalues=None, dimension=None):
        super().__init__(message)
        self.eigenvalues = eigenvalues
        self.dimension = dimension


class NotNormalizable(ModpError, ArithmeticError):
    pass


class SpanningIncomplete(ModpError, ArithmeticError):
    """Raised only on request; space_basis normally returns a flagged basis."""

    def __init__(self, message, rank=None, dimension=None):
        super().__init__(message)
        self.rank = rank
        self.dimension = dimension


# eigensystems / companion
class UnknownPrime(ModpError, KeyError):
    pass


class NotDistinguished(ModpError, ValueError):
    pass


class IncompleteFamily(ModpError, ValueError):
    pass


class UncertifiedInput(ModpError, ValueError):
    pass


class WeightMismatch(ModpError, ValueError):
    pass
