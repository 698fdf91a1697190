"""Density matrices, spectra and the majorisation machinery."""

import logging
import math
from typing import Any, Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError

from models import (
    DensityMatrix,
    GibbsPath,
    MajorisationChain,
    Spectrum,
    TangentVector,
    TTransform,
)
from utils.errors import (
    BoundaryError,
    DomainError,
    NumericalError,
    OrderingError,
    UsageError,
)
from utils.linalg import is_hermitian, jacobi_eigh

logger = logging.getLogger(__name__)

MAJORISATION_TOL = 1e-12
DECOMPOSE_TOL = 1e-12
MIN_SAMPLE_ENTRY = 1e-6

MatrixLike = Union[DensityMatrix, np.ndarray]


# =============================================================================
# Construction
# =============================================================================
def density_matrix(entries: Any, real: bool = False) -> DensityMatrix:
    """Build a DensityMatrix, reporting failures as domain or boundary errors."""
    arr = np.array(entries)
    if arr.ndim == 3 and arr.shape[-1] == 2 and not np.iscomplexobj(arr):
        arr = arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {arr.shape}")
    if not is_hermitian(arr):
        raise DomainError("matrix is not Hermitian")
    lam_min = float(jacobi_eigh(arr)[0][-1])
    if lam_min <= 0.0:
        raise BoundaryError(f"matrix is not positive definite (min eigenvalue {lam_min:.3e})")
    try:
        return DensityMatrix(entries=arr, real=real)
    except ValidationError as exc:
        raise DomainError(str(exc)) from exc


def random_unitary(n: int, rng: np.random.Generator, real: bool = False) -> np.ndarray:
    """Haar-distributed unitary (orthogonal when real) from a QR factorisation."""
    z = rng.standard_normal((n, n))
    if not real:
        z = z + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def diagonal_state(spectrum: Spectrum, unitary: Optional[np.ndarray] = None) -> DensityMatrix:
    """U diag(lambda) U*, the identity rotation when no unitary is given."""
    lam = spectrum.as_array()
    if unitary is None:
        return DensityMatrix(entries=np.diag(lam), real=True)
    u = np.asarray(unitary)
    arr = (u * lam) @ u.conj().T
    arr = 0.5 * (arr + arr.conj().T)
    real = not np.iscomplexobj(u)
    # Rotation rounding shifts the trace by a few ulps.
    arr = arr / np.trace(arr).real
    return DensityMatrix(entries=arr, real=real)


def random_density_matrix(
    n: int,
    rng: np.random.Generator,
    real: bool = False,
    mix: float = 0.0,
) -> DensityMatrix:
    """Random interior state; ``mix`` blends its spectrum towards uniform."""
    spectrum = sample_spectrum(n, rng)
    if mix > 0.0:
        spectrum = Spectrum.from_values(
            (1.0 - mix) * spectrum.as_array() + mix / n, normalize=True
        )
    return diagonal_state(spectrum, random_unitary(n, rng, real=real))


def random_tangent(n: int, rng: np.random.Generator, real: bool = False) -> TangentVector:
    """Traceless self-adjoint matrix of unit Frobenius norm."""
    z = rng.standard_normal((n, n))
    if not real:
        z = z + 1j * rng.standard_normal((n, n))
    h = 0.5 * (z + z.conj().T)
    h = h - (np.trace(h).real / n) * np.eye(n)
    norm = np.linalg.norm(h)
    if norm == 0.0:
        raise UsageError("a traceless tangent vector needs n >= 2")
    return TangentVector(entries=h / norm)


# =============================================================================
# Spectra
# =============================================================================
def spectral_decomposition(d: MatrixLike) -> tuple[Spectrum, np.ndarray]:
    """Eigenvalues (descending) with the unitary of eigenvectors."""
    arr = d.entries if isinstance(d, DensityMatrix) else np.asarray(d)
    if not isinstance(d, DensityMatrix) and not is_hermitian(arr):
        raise DomainError("matrix is not Hermitian")
    w, u = jacobi_eigh(arr)
    if w[-1] <= 0.0:
        raise BoundaryError(f"eigenvalue {w[-1]:.3e} is not positive")
    trace = math.fsum(w)
    if abs(trace - 1.0) > 1e-12:
        raise DomainError(f"trace must be 1 (got {trace!r})")
    return Spectrum(values=tuple(float(x) for x in w)), u


def eigvalsh(d: MatrixLike) -> Spectrum:
    """Descending spectrum of a density matrix."""
    return spectral_decomposition(d)[0]


def majorizes(a: Spectrum, b: Spectrum, tol: float = MAJORISATION_TOL) -> bool:
    """True iff a is more mixed than b (a precedes b)."""
    if a.n != b.n:
        raise UsageError(f"spectra have different lengths ({a.n} and {b.n})")
    return bool(np.all(a.prefix_sums() <= b.prefix_sums() + tol))


def t_transform(x: Spectrum, k: int, l: int, t: float) -> Spectrum:  # noqa: E741
    """Mix positions k and l with weight t and re-sort."""
    n = x.n
    if not (0 <= k < n and 0 <= l < n):
        raise UsageError(f"indices ({k}, {l}) out of range for n={n}")
    if k == l:
        raise UsageError("T-transform needs two distinct positions")
    if not (0.0 <= t <= 1.0):
        raise UsageError(f"t must lie in [0, 1], got {t!r}")
    values = x.as_array()
    xk, xl = values[k], values[l]
    values[k] = t * xk + (1.0 - t) * xl
    values[l] = (1.0 - t) * xk + t * xl
    return Spectrum.from_values(values)


def t_transform_decompose(a: Spectrum, b: Spectrum) -> list[TTransform]:
    """T-transforms carrying b to the more mixed a.

    Each step takes the last position j where b still exceeds a and the
    first later position k where a exceeds b, and moves the smaller of the
    two gaps from j to k. One position is settled per step, so at most
    n - 1 transforms are returned.
    """
    if not majorizes(a, b):
        raise OrderingError("first spectrum must be more mixed than the second")
    target = a.as_array()
    current = b
    transforms: list[TTransform] = []
    for _ in range(a.n):
        y = current.as_array()
        diff = y - target
        above = np.flatnonzero(diff > DECOMPOSE_TOL)
        if above.size == 0:
            break
        j = int(above[-1])
        below = np.flatnonzero(diff[j + 1:] < -DECOMPOSE_TOL)
        if below.size == 0:
            break
        k = j + 1 + int(below[0])
        delta = min(diff[j], -diff[k])
        t = 1.0 - delta / (y[j] - y[k])
        step = TTransform(k=j, l=k, t=min(1.0, max(0.0, t)))
        transforms.append(step)
        current = t_transform(current, step.k, step.l, step.t)
        logger.debug("T-transform %d: positions (%d, %d), t=%.17g", len(transforms), j, k, t)
    else:
        raise NumericalError(f"T-transform decomposition did not finish in {a.n} steps")
    return transforms


def replay(b: Spectrum, transforms: Sequence[TTransform]) -> list[Spectrum]:
    """All intermediate spectra obtained by applying transforms to b."""
    members = [b]
    for step in transforms:
        members.append(t_transform(members[-1], step.k, step.l, step.t))
    return members


def pair_chain(a: Spectrum, b: Spectrum) -> MajorisationChain:
    """Two-eigenvalue chain from the more mixed a to b."""
    transforms = t_transform_decompose(a, b)
    members = replay(b, transforms)[::-1]
    members[0] = a
    return MajorisationChain(members=tuple(members), two_point=True, transforms=tuple(transforms))


def doubly_stochastic(transforms: Sequence[TTransform], n: int) -> np.ndarray:
    """Matrix P with a = P b for the replayed transform sequence."""
    p = np.eye(n)
    for step in transforms:
        if max(step.k, step.l) >= n:
            raise UsageError(f"transform positions ({step.k}, {step.l}) exceed n={n}")
        mix = np.eye(n)
        mix[[step.k, step.l], [step.k, step.l]] = step.t
        mix[step.k, step.l] = mix[step.l, step.k] = 1.0 - step.t
        p = mix @ p
    return p


# =============================================================================
# Gibbs States
# =============================================================================
def gibbs(path: GibbsPath, beta: float) -> Spectrum:
    """Spectrum of exp(-beta H)/Tr exp(-beta H)."""
    if beta < 0.0 or not math.isfinite(beta):
        raise UsageError(f"beta must be finite and non-negative, got {beta!r}")
    logits = -beta * np.array(path.hamiltonian_eigs, dtype=float)
    weights = np.exp(logits - logits.max())
    if np.any(weights <= 0.0):
        raise BoundaryError(f"Gibbs state at beta={beta!r} underflows to the boundary")
    return Spectrum.from_values(weights / math.fsum(weights))


def gibbs_chain(path: GibbsPath) -> MajorisationChain:
    """Gibbs spectra along the path, checked to be a majorisation chain."""
    members = [gibbs(path, beta) for beta in path.betas]
    for z, (lo, hi) in enumerate(zip(members, members[1:])):
        if not majorizes(lo, hi, tol=1e-10):
            raise OrderingError(
                f"Gibbs states at beta={path.betas[z]!r} and {path.betas[z + 1]!r} are not ordered"
            )
    return MajorisationChain(members=tuple(members), two_point=False)


# =============================================================================
# Entropies
# =============================================================================
def von_neumann_entropy(s: Spectrum) -> float:
    """-sum lam log lam over the spectrum, in nats."""
    return -math.fsum(lam * math.log(lam) for lam in s.values)


def entropy_profile(chain: MajorisationChain) -> list[float]:
    """Entropy of every chain member, most mixed first."""
    return [von_neumann_entropy(member) for member in chain.members]


def _positive_eigh(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if not is_hermitian(arr, tol=1e-10):
        raise DomainError("relative entropy needs Hermitian arguments")
    w, u = jacobi_eigh(0.5 * (arr + arr.conj().T))
    if w[-1] <= 0.0:
        raise BoundaryError(f"relative entropy argument is singular (min eigenvalue {w[-1]:.3e})")
    return w, u


def relative_entropy(d1: MatrixLike, d2: MatrixLike) -> float:
    """Tr D1 (log D1 - log D2) for positive definite arguments.

    Plain arrays are accepted so that finite-difference stencils need not
    stay on the trace-one slice.
    """
    a1 = d1.entries if isinstance(d1, DensityMatrix) else np.asarray(d1)
    a2 = d2.entries if isinstance(d2, DensityMatrix) else np.asarray(d2)
    if a1.shape != a2.shape:
        raise UsageError(f"shape mismatch {a1.shape} vs {a2.shape}")
    w1, _ = _positive_eigh(a1)
    w2, u2 = _positive_eigh(a2)
    log_d2 = (u2 * np.log(w2)) @ u2.conj().T
    cross = np.trace(a1 @ log_d2).real
    return math.fsum(float(x) * math.log(x) for x in w1) - float(cross)


# =============================================================================
# Sampling
# =============================================================================
def sample_spectrum(
    n: int, rng: np.random.Generator, min_entry: float = MIN_SAMPLE_ENTRY
) -> Spectrum:
    """Uniform point of the simplex interior, rejecting entries below min_entry."""
    if n < 1:
        raise UsageError("n must be at least 1")
    if n == 1:
        return Spectrum(values=(1.0,))
    while True:
        p = rng.dirichlet(np.ones(n))
        if p.min() >= min_entry:
            return Spectrum.from_values(p, normalize=True)


__all__ = [
    "density_matrix",
    "random_unitary",
    "diagonal_state",
    "random_density_matrix",
    "random_tangent",
    "spectral_decomposition",
    "eigvalsh",
    "majorizes",
    "t_transform",
    "t_transform_decompose",
    "replay",
    "pair_chain",
    "doubly_stochastic",
    "gibbs",
    "gibbs_chain",
    "von_neumann_entropy",
    "entropy_profile",
    "relative_entropy",
    "sample_spectrum",
]
