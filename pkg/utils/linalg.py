"""Self-contained Hermitian eigensolver and spectral matrix functions."""

import logging
from typing import Callable

import numpy as np

from utils.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)

OFF_DIAGONAL_TOL = 1e-14
MAX_SWEEPS = 64


def is_hermitian(matrix: np.ndarray, tol: float = 1e-12) -> bool:
    """Check entrywise self-adjointness."""
    return bool(np.max(np.abs(matrix - matrix.conj().T), initial=0.0) <= tol)


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(
    matrix: np.ndarray,
    tol: float = OFF_DIAGONAL_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalisation of a Hermitian matrix.

    Returns eigenvalues sorted descending and the unitary whose columns are
    the matching eigenvectors, so that ``matrix = U diag(w) U*``. Real
    symmetric input stays real throughout.
    """
    a = np.array(matrix, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if not is_hermitian(a):
        raise DomainError("matrix is not Hermitian")

    real = not np.iscomplexobj(a) or not np.any(a.imag)
    a = a.real.astype(float) if real else a.astype(complex)
    n = a.shape[0]
    v = np.eye(n, dtype=a.dtype)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    sweep = 0
    while _off_norm(a) >= threshold:
        if sweep >= max_sweeps:
            raise NumericalError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {_off_norm(a):.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                b = abs(apq)
                if b == 0.0:
                    continue
                phase = apq / b
                theta = 0.5 * np.arctan2(2.0 * b, (a[q, q] - a[p, p]).real)
                c, s = np.cos(theta), np.sin(theta)
                rot = np.array(
                    [[c, s], [-s * np.conj(phase), c * np.conj(phase)]],
                    dtype=a.dtype,
                )
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.conj().T @ a[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ rot
        sweep += 1

    logger.debug("Jacobi converged after %d sweeps (n=%d)", sweep, n)
    w = np.real(np.diag(a)).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def jacobi_eigvalsh(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues only, sorted descending."""
    return jacobi_eigh(matrix)[0]


def spectral_apply(
    matrix: np.ndarray, fn: Callable[[np.ndarray], np.ndarray]
) -> np.ndarray:
    """Apply ``fn`` to a Hermitian matrix through its eigendecomposition."""
    w, u = jacobi_eigh(matrix)
    return (u * fn(w)) @ u.conj().T


def logm_positive(matrix: np.ndarray) -> np.ndarray:
    """Matrix logarithm of a positive definite matrix."""
    w, u = jacobi_eigh(matrix)
    if w[-1] <= 0.0:
        raise DomainError(f"logarithm needs a positive definite matrix (min eigenvalue {w[-1]:.3e})")
    return (u * np.log(w)) @ u.conj().T


__all__ = [
    "is_hermitian",
    "jacobi_eigh",
    "jacobi_eigvalsh",
    "spectral_apply",
    "logm_positive",
]
