"""Exception types raised by the library."""


class QSEError(ValueError):
    """Base class for all errors raised by :mod:`qse`."""


class DimensionError(QSEError):
    """Shapes or dimensions of the operands do not match."""


class SymmetryError(QSEError):
    """A matrix that must be Hermitian is not."""


class DomainError(QSEError):
    """An argument lies outside the domain of a scalar function."""


class InvalidParameterError(QSEError):
    """A numerical parameter (norm order, entropy parameter, rank...) is out of range."""


class ValidationError(QSEError):
    """An object violates its defining invariants (density operator, channel, Choi matrix)."""


class NotApplicableError(QSEError):
    """A bound or theorem is not stated for the requested parameters."""
