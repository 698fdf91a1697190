"""Exception hierarchy shared by every km-lab package."""


class KMLabError(Exception):
    """Base class for all km-lab errors."""


class DomainError(KMLabError, ValueError):
    """Argument outside the domain of a kernel or matrix operation."""


class BoundaryError(DomainError):
    """State on or beyond the boundary of the positive cone."""


class UsageError(KMLabError, ValueError):
    """Bad indices, parameters or names supplied by the caller."""


class OrderingError(KMLabError, ValueError):
    """Majorisation precondition violated."""


class NumericalError(KMLabError, ArithmeticError):
    """Iterative or finite-difference computation failed to behave."""


__all__ = [
    "KMLabError",
    "DomainError",
    "BoundaryError",
    "UsageError",
    "OrderingError",
    "NumericalError",
]
