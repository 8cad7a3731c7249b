"""Exception types raised by validation and construction routines."""


class IskkError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(IskkError):
    """A structure failed one of its defining axioms; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAssociative(ValidationError):
    pass


class NoUniqueInverse(ValidationError):
    pass


class IdempotentsDontCommute(ValidationError):
    pass


class BadUnit(ValidationError):
    pass


class BadZero(ValidationError):
    pass


class NotIdempotent(ValidationError):
    pass


class UnsupportedSize(IskkError):
    pass


class NotSubsemigroup(ValidationError):
    pass


class NotCentral(ValidationError):
    pass


class NotEquivariant(ValidationError):
    pass


class NotEUnitary(ValidationError):
    pass


class InvalidCoefficientAlgebra(ValidationError):
    pass


class InvalidAction(ValidationError):
    pass


class ChainTooLong(IskkError):
    pass


class NonIntegralMultiplicity(IskkError):
    pass


class CenterDoesNotSplit(IskkError):
    def __init__(self, message, witness_poly=None):
        super().__init__(message)
        self.witness_poly = witness_poly


class HypothesesNotMet(IskkError):
    pass


class MalformedInput(IskkError):
    """Bad user-supplied data (files, CLI specs); maps to exit code 2."""
