"""Utils module - errors, environment config and linear algebra helpers."""

from utils.config import THREADS_ENV, thread_limit
from utils.errors import (
    BoundaryError,
    DomainError,
    KMLabError,
    NumericalError,
    OrderingError,
    UsageError,
)
from utils.linalg import (
    is_hermitian,
    jacobi_eigh,
    jacobi_eigvalsh,
    logm_positive,
    spectral_apply,
)

__all__ = [
    "THREADS_ENV",
    "thread_limit",
    "KMLabError",
    "DomainError",
    "BoundaryError",
    "UsageError",
    "OrderingError",
    "NumericalError",
    "is_hermitian",
    "jacobi_eigh",
    "jacobi_eigvalsh",
    "logm_positive",
    "spectral_apply",
]
