"""Independent finite-difference and quadrature checks of the geometry.

The metric is recovered as the negated mixed second difference of the
relative entropy, and the scalar curvature intrinsically from metric
samples in an affine chart: Christoffel symbols from central differences,
the Riemann tensor, then the trace with the inverse metric.
"""

import logging
import math
from itertools import combinations
from typing import Union

import numpy as np
from scipy import integrate

from geometry.curvature import metric_gram, scal_pair
from geometry.kernels import DEFAULT_POLICY, v_fn
from geometry.states import relative_entropy, spectral_decomposition
from models import Chart, DensityMatrix, EvalPolicy, Spectrum, TangentVector
from utils.errors import BoundaryError, DomainError, NumericalError, UsageError
from utils.linalg import jacobi_eigvalsh

logger = logging.getLogger(__name__)

MAX_CHART_DIMENSION = 8
CONDITION_LIMIT = 1e12

MatrixLike = Union[TangentVector, np.ndarray]


# =============================================================================
# Quadrature
# =============================================================================
def divided_difference_quad(*args: float) -> float:
    """m_k by adaptive quadrature of its integral representation.

    With x0 = min(args), d_i = x_i - x0 and x0 + t = x0 e^s the integrand
    becomes e^{-(k-1)s} / prod(1 + (d_i/x0) e^{-s}) on s in [0, inf),
    split at the knees s = log(d_i/x0).
    """
    if len(args) < 2:
        raise UsageError("divided differences need at least two arguments")
    if any(not (x > 0.0 and math.isfinite(x)) for x in args):
        raise DomainError(f"arguments must be positive and finite, got {args!r}")
    k = len(args)
    x0 = min(args)
    ratios = np.array([(x - x0) / x0 for x in args])

    def integrand(s: float) -> float:
        return math.exp(-(k - 1) * s) / float(np.prod(1.0 + ratios * math.exp(-s)))

    knees = sorted({math.log(r) for r in ratios if r > 1.0})
    edges = [0.0, *knees, math.inf]
    pieces = []
    for lo, hi in zip(edges, edges[1:]):
        value, _ = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)
        pieces.append(value)
    return math.fsum(pieces) / x0 ** (k - 1)


# =============================================================================
# Metric From Relative Entropy
# =============================================================================
def _entries(x: MatrixLike) -> np.ndarray:
    return x.entries if isinstance(x, TangentVector) else np.asarray(x)


def metric_fd(
    d: DensityMatrix,
    x: MatrixLike,
    y: MatrixLike,
    h: float = 1e-4,
    richardson: bool = True,
) -> float:
    """-d^2/dt ds S(D + tX, D + sY) at zero by central differences.

    One Richardson step combines h and 2h as (4F(h) - F(2h))/3.
    """
    base = d.entries
    xa, ya = _entries(x), _entries(y)
    if xa.shape != base.shape or ya.shape != base.shape:
        raise UsageError("tangent vectors must match the state dimension")
    if h <= 0.0:
        raise UsageError(f"step must be positive, got {h!r}")
    reach = 2.0 * h if richardson else h
    for direction in (xa, ya):
        for sign in (1.0, -1.0):
            lam_min = float(jacobi_eigvalsh(base + sign * reach * direction)[-1])
            if lam_min <= 0.0:
                raise BoundaryError(
                    f"stencil point leaves the positive cone (min eigenvalue {lam_min:.3e})"
                )

    def mixed(step: float) -> float:
        plus_x, minus_x = base + step * xa, base - step * xa
        plus_y, minus_y = base + step * ya, base - step * ya
        total = (
            relative_entropy(plus_x, plus_y)
            - relative_entropy(plus_x, minus_y)
            - relative_entropy(minus_x, plus_y)
            + relative_entropy(minus_x, minus_y)
        )
        return -total / (4.0 * step * step)

    if not richardson:
        return mixed(h)
    return (4.0 * mixed(h) - mixed(2.0 * h)) / 3.0


# =============================================================================
# Riemannian Curvature
# =============================================================================
def christoffel_symbols(g_inv: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Gamma[c, a, b] from dg[a, b, c] = d_a g_bc."""
    s = -np.einsum("dab->abd", dg) + dg + np.einsum("bda->abd", dg)
    return 0.5 * np.einsum("cd,abd->cab", g_inv, s)


def christoffel_deriv(
    g_inv: np.ndarray, dg_inv: np.ndarray, dg: np.ndarray, ddg: np.ndarray
) -> np.ndarray:
    """dGamma[e, c, a, b] = d_e Gamma^c_ab."""
    s = -np.einsum("dab->abd", dg) + dg + np.einsum("bda->abd", dg)
    ds = -np.einsum("edab->eabd", ddg) + ddg + np.einsum("ebda->eabd", ddg)
    return 0.5 * np.einsum("ecd,abd->ecab", dg_inv, s) + 0.5 * np.einsum(
        "cd,eabd->ecab", g_inv, ds
    )


def riemann_tensor(gamma: np.ndarray, dgamma: np.ndarray) -> np.ndarray:
    """R[a, b, c, d] = R^a_bcd, positive sectional curvature on spheres."""
    return (
        np.einsum("cadb->abcd", dgamma)
        - np.einsum("dacb->abcd", dgamma)
        + np.einsum("ace,edb->abcd", gamma, gamma)
        - np.einsum("ade,ecb->abcd", gamma, gamma)
    )


def scalar_from_riemann(g_inv: np.ndarray, riemann: np.ndarray) -> float:
    ricci = np.einsum("abad->bd", riemann)
    return float(np.einsum("bd,bd->", g_inv, ricci))


def scal_fd(chart: Chart, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Scalar curvature at the chart origin from sampled metric values."""
    dim = len(chart.directions)
    if dim > MAX_CHART_DIMENSION:
        raise UsageError(f"chart dimension {dim} exceeds the limit of {MAX_CHART_DIMENSION}")
    base = chart.base.entries
    dirs = [d.entries for d in chart.directions]
    h = chart.step

    def gram(offsets: dict[int, float]) -> np.ndarray:
        point = base + sum(sign * h * dirs[a] for a, sign in offsets.items())
        return metric_gram(point, dirs, policy)

    g0 = gram({})
    plus = [gram({a: 1.0}) for a in range(dim)]
    minus = [gram({a: -1.0}) for a in range(dim)]

    dg = np.array([(plus[a] - minus[a]) / (2.0 * h) for a in range(dim)])
    ddg = np.empty((dim, dim, dim, dim))
    for a in range(dim):
        ddg[a, a] = (plus[a] - 2.0 * g0 + minus[a]) / (h * h)
    for a, b in combinations(range(dim), 2):
        cross = (
            gram({a: 1.0, b: 1.0})
            - gram({a: 1.0, b: -1.0})
            - gram({a: -1.0, b: 1.0})
            + gram({a: -1.0, b: -1.0})
        ) / (4.0 * h * h)
        ddg[a, b] = ddg[b, a] = cross

    cond = float(np.linalg.cond(g0))
    if cond > CONDITION_LIMIT:
        raise NumericalError(f"chart metric is ill-conditioned (cond {cond:.3e})")
    if cond > 1e-2 * CONDITION_LIMIT:
        logger.warning("chart metric condition number %.3e is close to the limit", cond)
    g_inv = np.linalg.solve(g0, np.eye(dim))
    g_inv = 0.5 * (g_inv + g_inv.T)
    dg_inv = -np.einsum("cp,epq,qd->ecd", g_inv, dg, g_inv)

    gamma = christoffel_symbols(g_inv, dg)
    dgamma = christoffel_deriv(g_inv, dg_inv, dg, ddg)
    value = scalar_from_riemann(g_inv, riemann_tensor(gamma, dgamma))
    logger.debug("scal_fd: dim=%d step=%.1e value=%.12g", dim, h, value)
    return value


def intrinsic_scal(s: Spectrum, real: bool = False, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Intrinsic scalar curvature of the trace-one slice at spectrum s.

    The formula values carry the extrinsic term d(d-1)/4 of the slice with
    d its dimension; the real formula also carries the diagonal v terms.
    """
    n = s.n
    complex_value, real_value = scal_pair(s, policy)
    if not real:
        dim = n * n - 1
        return complex_value + dim * (dim - 1) / 4.0
    dim = n * (n + 1) // 2 - 1
    diagonal_v = math.fsum(v_fn(lam, lam, policy) for lam in s.values)
    return real_value - 0.25 * diagonal_v + dim * (dim - 1) / 4.0


# =============================================================================
# Charts
# =============================================================================
def _eigenbasis_directions(n: int, real: bool) -> list[np.ndarray]:
    """Frobenius-orthonormal traceless matrices: F/sqrt2, H/sqrt2, diagonal differences."""
    dtype = float if real else complex
    directions = []
    for k in range(n):
        for l in range(k + 1, n):  # noqa: E741
            f = np.zeros((n, n), dtype=dtype)
            f[k, l] = f[l, k] = 1.0 / math.sqrt(2.0)
            directions.append(f)
            if not real:
                hm = np.zeros((n, n), dtype=complex)
                hm[k, l] = 1j / math.sqrt(2.0)
                hm[l, k] = -1j / math.sqrt(2.0)
                directions.append(hm)
    for m in range(1, n):
        diag = np.zeros(n)
        diag[:m] = 1.0
        diag[m] = -float(m)
        directions.append(np.diag(diag / math.sqrt(m * (m + 1))).astype(dtype))
    return directions


def default_chart(d: DensityMatrix, real: bool = False, step: float = 1e-3) -> Chart:
    """Orthonormal traceless directions built in the eigenbasis of D."""
    if real and np.iscomplexobj(d.entries) and np.any(d.entries.imag):
        raise UsageError("a real chart needs a real symmetric base state")
    base = d
    if real and not d.real:
        base = DensityMatrix(entries=d.entries.real, real=True)
    _, u = spectral_decomposition(base)
    if real:
        u = u.real
    directions = []
    for local in _eigenbasis_directions(base.n, real):
        rotated = u @ local @ u.conj().T
        rotated = 0.5 * (rotated + rotated.conj().T)
        if real:
            rotated = rotated.real
        directions.append(TangentVector(entries=rotated))
    return Chart(base=base, directions=tuple(directions), step=step, real=real)


def recombine_chart(chart: Chart, matrix: np.ndarray) -> Chart:
    """Same base and step, directions replaced by rows of matrix @ directions."""
    m = np.asarray(matrix, dtype=float)
    dim = len(chart.directions)
    if m.shape != (dim, dim):
        raise UsageError(f"recombination matrix must be {dim}x{dim}, got {m.shape}")
    if np.linalg.cond(m) > CONDITION_LIMIT:
        raise NumericalError("recombination matrix is singular")
    stack = np.array([d.entries for d in chart.directions])
    mixed = np.einsum("ab,bij->aij", m, stack)
    directions = tuple(TangentVector(entries=entry) for entry in mixed)
    return Chart(base=chart.base, directions=directions, step=chart.step, real=chart.real)


__all__ = [
    "divided_difference_quad",
    "metric_fd",
    "christoffel_symbols",
    "christoffel_deriv",
    "riemann_tensor",
    "scalar_from_riemann",
    "scal_fd",
    "intrinsic_scal",
    "default_chart",
    "recombine_chart",
]
