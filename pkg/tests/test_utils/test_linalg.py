"""Jacobi eigensolver and spectral function tests."""

import numpy as np
import pytest

from geometry.states import random_unitary
from utils.errors import DomainError, KMLabError, NumericalError
from utils.linalg import (
    is_hermitian,
    jacobi_eigh,
    jacobi_eigvalsh,
    logm_positive,
    spectral_apply,
)


class TestJacobi:
    """Test the cyclic Jacobi eigensolver."""

    def test_diagonal_input(self):
        """Test that a diagonal matrix returns its entries sorted descending."""
        w, u = jacobi_eigh(np.diag([0.2, 0.5, 0.3]))
        assert w.tolist() == [0.5, 0.3, 0.2]
        assert np.allclose(np.abs(u), np.eye(3)[:, [1, 2, 0]])

    def test_reconstructs_complex_matrix(self, rng):
        """Test that U diag(w) U* reproduces a random Hermitian matrix."""
        z = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        h = z + z.conj().T
        w, u = jacobi_eigh(h)
        assert np.allclose((u * w) @ u.conj().T, h, atol=1e-12)
        assert np.allclose(u.conj().T @ u, np.eye(5), atol=1e-12)
        assert np.all(np.diff(w) <= 0.0)

    def test_matches_numpy(self, rng):
        """Test agreement with numpy's Hermitian eigenvalues."""
        z = rng.standard_normal((6, 6))
        h = z + z.T
        assert np.allclose(jacobi_eigvalsh(h), np.linalg.eigvalsh(h)[::-1], atol=1e-12)

    def test_real_input_stays_real(self, rng):
        """Test that real symmetric input gives real eigenvectors."""
        z = rng.standard_normal((4, 4))
        _, u = jacobi_eigh(z + z.T)
        assert not np.iscomplexobj(u)

    def test_rejects_non_hermitian(self):
        """Test that a non-Hermitian matrix raises DomainError."""
        with pytest.raises(DomainError):
            jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_non_square(self):
        """Test that a non-square matrix raises DomainError."""
        with pytest.raises(DomainError):
            jacobi_eigh(np.zeros((2, 3)))

    def test_sweep_limit(self, rng):
        """Test that exhausting the sweep budget raises NumericalError."""
        z = rng.standard_normal((6, 6))
        with pytest.raises(NumericalError):
            jacobi_eigh(z + z.T, max_sweeps=0)


class TestSpectralFunctions:
    """Test matrix functions built on the eigensolver."""

    def test_is_hermitian(self):
        """Test the entrywise self-adjointness check."""
        assert is_hermitian(np.array([[1.0, 1j], [-1j, 2.0]]))
        assert not is_hermitian(np.array([[1.0, 1j], [1j, 2.0]]))

    def test_logm_inverts_exp(self, rng):
        """Test that logm undoes the spectral exponential."""
        u = random_unitary(4, rng)
        h = (u * np.array([0.3, -0.2, 1.1, 0.0])) @ u.conj().T
        h = 0.5 * (h + h.conj().T)
        expd = spectral_apply(h, np.exp)
        assert np.allclose(logm_positive(expd), h, atol=1e-10)

    def test_logm_rejects_singular(self):
        """Test that logm of a singular matrix raises DomainError."""
        with pytest.raises(DomainError):
            logm_positive(np.diag([1.0, 0.0]))


class TestErrors:
    """Test the error hierarchy."""

    def test_errors_share_a_base(self):
        """Test that library errors derive from KMLabError and builtin classes."""
        assert issubclass(DomainError, KMLabError)
        assert issubclass(DomainError, ValueError)
        assert issubclass(NumericalError, ArithmeticError)
