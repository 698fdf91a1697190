"""Test configuration and shared fixtures."""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from geometry.kernels import DEFAULT_POLICY, HARNESS_POLICY  # noqa: E402
from geometry.states import diagonal_state, random_density_matrix, random_unitary  # noqa: E402
from models import EvalPolicy, Spectrum  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so every test draws the same numbers."""
    return np.random.default_rng(20240611)


@pytest.fixture
def policy() -> EvalPolicy:
    """Library default evaluation policy."""
    return DEFAULT_POLICY


@pytest.fixture
def harness_policy() -> EvalPolicy:
    """Policy used by the sweeps."""
    return HARNESS_POLICY


@pytest.fixture
def qutrit_spectrum() -> Spectrum:
    """A generic three-level spectrum."""
    return Spectrum(values=(0.5, 0.3, 0.2))


@pytest.fixture
def qubit_spectrum() -> Spectrum:
    """A generic two-level spectrum."""
    return Spectrum(values=(0.7, 0.3))


@pytest.fixture
def rotated_qutrit(qutrit_spectrum: Spectrum, rng: np.random.Generator):
    """The generic qutrit spectrum in a random complex basis."""
    return diagonal_state(qutrit_spectrum, random_unitary(3, rng))


@pytest.fixture
def mixed_state(rng: np.random.Generator):
    """Random complex qutrit pulled halfway towards the uniform state."""
    return random_density_matrix(3, rng, mix=0.5)
