"""Exception hierarchy shared by every module of the package."""


class IrreduciblesError(Exception):
    """Base class for all package errors."""


class InvalidInvariants(IrreduciblesError, ValueError):
    pass


class GroupMismatch(IrreduciblesError, ValueError):
    pass


class HasPrincipalSubtype(IrreduciblesError, ValueError):
    """The type has a nonzero principal subtype (not weakly coprime)."""


class EmptyTypeSet(IrreduciblesError, ValueError):
    pass


class DimensionMismatch(IrreduciblesError, ValueError):
    pass


class NonConvergence(IrreduciblesError, RuntimeError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DomainError(IrreduciblesError, ValueError):
    pass


class NotSquarefree(IrreduciblesError, ValueError):
    pass


class NotImaginary(IrreduciblesError, ValueError):
    pass


class NotPrime(IrreduciblesError, ValueError):
    pass


class ZeroIdeal(IrreduciblesError, ValueError):
    pass


class FactorizationOverflow(IrreduciblesError, OverflowError):
    pass


class DivisorExplosion(IrreduciblesError, RuntimeError):
    pass


class NotCoprimeToModulus(IrreduciblesError, ValueError):
    pass


class ScanTooLarge(IrreduciblesError, ValueError):
    pass
