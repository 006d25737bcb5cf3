"""Exception types shared across the package."""


class QTroeschError(Exception):
    """Base class for every error raised by this package."""


class DomainError(QTroeschError, ValueError):
    """An argument lies outside the range an operation accepts."""


class FieldSpecError(DomainError):
    """A field description is malformed (bad kind, even ell, composite p, ...)."""


class NoRootError(QTroeschError):
    """The prime field has no element of the requested multiplicative order."""


class IncompatibleError(QTroeschError):
    """Two objects live over different fields or have different ell."""


class NilpotencyError(QTroeschError):
    """A complex violates delta^ell = 0.

    ``degree`` is the source degree of the first non-zero ell-fold composite.
    """

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class NotInjectiveError(QTroeschError):
    pass


class NotChainMapError(QTroeschError):
    pass


class PreconditionError(QTroeschError):
    pass


class NotCalibratedError(QTroeschError):
    pass
