"""Density matrix, majorisation and Gibbs state tests."""

import math

import numpy as np
import pytest

from geometry.states import (
    density_matrix,
    diagonal_state,
    doubly_stochastic,
    eigvalsh,
    entropy_profile,
    gibbs,
    gibbs_chain,
    majorizes,
    pair_chain,
    random_density_matrix,
    random_tangent,
    relative_entropy,
    replay,
    sample_spectrum,
    spectral_decomposition,
    t_transform,
    t_transform_decompose,
    von_neumann_entropy,
)
from models import GibbsPath, Spectrum, TTransform
from utils.errors import BoundaryError, DomainError, OrderingError, UsageError


class TestConstruction:
    """Test building density matrices and tangent vectors."""

    def test_density_matrix_valid(self):
        """Test a valid complex state."""
        d = density_matrix([[0.6, 0.1j], [-0.1j, 0.4]])
        assert d.n == 2

    def test_density_matrix_not_hermitian(self):
        """Test that a non-Hermitian matrix raises DomainError."""
        with pytest.raises(DomainError):
            density_matrix([[0.6, 0.1], [0.3, 0.4]])

    def test_density_matrix_not_positive(self):
        """Test that an indefinite matrix raises BoundaryError."""
        with pytest.raises(BoundaryError):
            density_matrix([[1.2, 0.0], [0.0, -0.2]])

    def test_density_matrix_bad_trace(self):
        """Test that a trace other than one raises DomainError."""
        with pytest.raises(DomainError):
            density_matrix([[0.6, 0.0], [0.0, 0.6]])

    def test_density_matrix_not_square(self):
        """Test that a non-square array raises DomainError."""
        with pytest.raises(DomainError):
            density_matrix([[0.5, 0.5]])

    def test_diagonal_state_spectrum(self, qutrit_spectrum, rng):
        """Test that a rotated state keeps its spectrum."""
        from geometry.states import random_unitary

        d = diagonal_state(qutrit_spectrum, random_unitary(3, rng))
        assert eigvalsh(d).values == pytest.approx(qutrit_spectrum.values, abs=1e-13)

    def test_random_density_matrix_mix_one(self, rng):
        """Test that mix=1 gives the uniform state."""
        d = random_density_matrix(3, rng, mix=1.0)
        assert eigvalsh(d).values == pytest.approx((1 / 3,) * 3, abs=1e-13)

    def test_random_real_state(self, rng):
        """Test that real states have real entries."""
        d = random_density_matrix(4, rng, real=True)
        assert d.real
        assert not np.iscomplexobj(d.entries)

    @pytest.mark.parametrize("real", [False, True])
    def test_random_tangent(self, rng, real):
        """Test that random tangents are traceless with unit norm."""
        x = random_tangent(3, rng, real=real)
        assert abs(np.trace(x.entries)) < 1e-14
        assert np.linalg.norm(x.entries) == pytest.approx(1.0)
        if real:
            assert not np.iscomplexobj(x.entries)

    def test_random_tangent_needs_two_levels(self, rng):
        """Test that n = 1 has no tangent vectors."""
        with pytest.raises(UsageError):
            random_tangent(1, rng)


class TestSpectra:
    """Test spectra and majorisation."""

    def test_spectral_decomposition_reconstructs(self, rotated_qutrit):
        """Test that U diag(lambda) U* gives back the state."""
        s, u = spectral_decomposition(rotated_qutrit)
        assert np.allclose((u * s.as_array()) @ u.conj().T, rotated_qutrit.entries, atol=1e-13)

    def test_uniform_majorizes_everything(self, qutrit_spectrum):
        """Test that the uniform spectrum is more mixed than any other."""
        uniform = Spectrum.uniform(3)
        assert majorizes(uniform, qutrit_spectrum)
        assert not majorizes(qutrit_spectrum, uniform)

    def test_majorizes_is_reflexive(self, qutrit_spectrum):
        """Test that a spectrum precedes itself."""
        assert majorizes(qutrit_spectrum, qutrit_spectrum)

    def test_majorizes_length_mismatch(self, qutrit_spectrum, qubit_spectrum):
        """Test that spectra of different lengths are a usage error."""
        with pytest.raises(UsageError):
            majorizes(qutrit_spectrum, qubit_spectrum)

    def test_sample_spectrum(self, rng):
        """Test that samples are valid interior spectra."""
        for n in (1, 2, 5):
            s = sample_spectrum(n, rng)
            assert s.n == n
            assert min(s.values) >= 1e-6


class TestTTransforms:
    """Test T-transforms and their decomposition."""

    def test_half_mix(self, qubit_spectrum):
        """Test that t = 1/2 averages the two positions."""
        assert t_transform(qubit_spectrum, 0, 1, 0.5).values == pytest.approx((0.5, 0.5))

    def test_identity_and_swap(self, qutrit_spectrum):
        """Test that t = 1 is the identity and t = 0 a swap, re-sorted."""
        assert t_transform(qutrit_spectrum, 0, 2, 1.0).values == qutrit_spectrum.values
        assert t_transform(qutrit_spectrum, 0, 2, 0.0).values == qutrit_spectrum.values

    def test_result_is_more_mixed(self, qutrit_spectrum):
        """Test that a T-transform moves towards the uniform spectrum."""
        mixed = t_transform(qutrit_spectrum, 0, 2, 0.7)
        assert majorizes(mixed, qutrit_spectrum)

    def test_bad_arguments(self, qutrit_spectrum):
        """Test index and weight validation."""
        with pytest.raises(UsageError):
            t_transform(qutrit_spectrum, 0, 0, 0.5)
        with pytest.raises(UsageError):
            t_transform(qutrit_spectrum, 0, 3, 0.5)
        with pytest.raises(UsageError):
            t_transform(qutrit_spectrum, 0, 1, 1.5)

    def test_decompose_replays_to_target(self):
        """Test that the decomposition carries b to a."""
        a = Spectrum(values=(0.35, 0.3, 0.2, 0.15))
        b = Spectrum(values=(0.6, 0.2, 0.15, 0.05))
        transforms = t_transform_decompose(a, b)
        assert 1 <= len(transforms) <= 3
        assert replay(b, transforms)[-1].values == pytest.approx(a.values, abs=1e-10)

    def test_decompose_random_pairs(self, rng):
        """Test decompositions between random spectra and their T-transforms."""
        for _ in range(20):
            b = sample_spectrum(5, rng)
            a = b
            for _ in range(4):
                k, l = rng.choice(5, size=2, replace=False)  # noqa: E741
                a = t_transform(a, int(k), int(l), float(rng.uniform(0.1, 0.9)))
            transforms = t_transform_decompose(a, b)
            assert len(transforms) <= 4
            assert replay(b, transforms)[-1].values == pytest.approx(a.values, abs=1e-10)

    def test_decompose_requires_order(self, qutrit_spectrum):
        """Test that a less mixed first argument raises OrderingError."""
        with pytest.raises(OrderingError):
            t_transform_decompose(qutrit_spectrum, Spectrum.uniform(3))

    def test_decompose_equal_spectra(self, qutrit_spectrum):
        """Test that equal spectra need no transforms."""
        assert t_transform_decompose(qutrit_spectrum, qutrit_spectrum) == []

    def test_pair_chain(self):
        """Test that the chain runs from a to b through two-point links."""
        a = Spectrum(values=(0.4, 0.35, 0.25))
        b = Spectrum(values=(0.7, 0.2, 0.1))
        chain = pair_chain(a, b)
        assert chain.members[0] == a
        assert chain.members[-1] == b
        assert chain.two_point
        assert len(chain.transforms) == len(chain.members) - 1

    def test_doubly_stochastic(self):
        """Test that P is doubly stochastic with a = P b."""
        a = Spectrum(values=(0.4, 0.35, 0.25))
        b = Spectrum(values=(0.7, 0.2, 0.1))
        p = doubly_stochastic(t_transform_decompose(a, b), 3)
        assert np.allclose(p.sum(axis=0), 1.0)
        assert np.allclose(p.sum(axis=1), 1.0)
        assert np.all(p >= 0.0)
        assert np.allclose(p @ b.as_array(), a.as_array(), atol=1e-12)

    def test_doubly_stochastic_position_check(self):
        """Test that positions beyond n are rejected."""
        with pytest.raises(UsageError):
            doubly_stochastic([TTransform(k=0, l=3, t=0.5)], 3)


class TestGibbsAndEntropy:
    """Test Gibbs states and entropies."""

    def test_gibbs_at_zero_is_uniform(self):
        """Test that beta = 0 gives the uniform spectrum."""
        path = GibbsPath(hamiltonian_eigs=(0.0, 1.0, 2.5), betas=(1.0,))
        assert gibbs(path, 0.0).values == pytest.approx((1 / 3,) * 3)

    def test_gibbs_two_level(self):
        """Test the two-level Boltzmann weights."""
        path = GibbsPath(hamiltonian_eigs=(0.0, 1.0), betas=(1.0,))
        top = 1.0 / (1.0 + math.exp(-1.0))
        assert gibbs(path, 1.0).values == pytest.approx((top, 1.0 - top))

    def test_gibbs_negative_beta(self):
        """Test that negative beta is a usage error."""
        path = GibbsPath(hamiltonian_eigs=(0.0, 1.0), betas=(1.0,))
        with pytest.raises(UsageError):
            gibbs(path, -1.0)

    def test_gibbs_underflow(self):
        """Test that an underflowing weight raises BoundaryError."""
        path = GibbsPath(hamiltonian_eigs=(0.0, 1000.0), betas=(1.0,))
        with pytest.raises(BoundaryError):
            gibbs(path, 1.0)

    def test_gibbs_chain_entropy_falls(self):
        """Test that entropy does not increase along a Gibbs path."""
        path = GibbsPath(hamiltonian_eigs=(-0.3, 0.1, 0.8, 1.2), betas=(0.1, 0.5, 1.0, 3.0))
        entropies = entropy_profile(gibbs_chain(path))
        assert all(e1 >= e2 for e1, e2 in zip(entropies, entropies[1:]))

    def test_entropy_of_uniform(self):
        """Test that the uniform spectrum has entropy log n."""
        assert von_neumann_entropy(Spectrum.uniform(4)) == pytest.approx(math.log(4.0))

    def test_relative_entropy_zero_on_diagonal(self, rotated_qutrit):
        """Test that S(D, D) = 0."""
        assert relative_entropy(rotated_qutrit, rotated_qutrit) == pytest.approx(0.0, abs=1e-13)

    def test_relative_entropy_positive(self, rotated_qutrit, mixed_state):
        """Test that S(D1, D2) > 0 for distinct states."""
        assert relative_entropy(rotated_qutrit, mixed_state) > 0.0

    def test_relative_entropy_diagonal_states(self):
        """Test the classical value for commuting states."""
        d1 = diagonal_state(Spectrum(values=(0.7, 0.3)))
        d2 = diagonal_state(Spectrum(values=(0.5, 0.5)))
        expected = 0.7 * math.log(0.7 / 0.5) + 0.3 * math.log(0.3 / 0.5)
        assert relative_entropy(d1, d2) == pytest.approx(expected, rel=1e-12)

    def test_relative_entropy_singular(self):
        """Test that a singular second argument raises BoundaryError."""
        with pytest.raises(BoundaryError):
            relative_entropy(np.diag([0.5, 0.5]), np.diag([1.0, 0.0]))
