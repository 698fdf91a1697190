"""Kubo-Mori metric, scalar curvature formulas and their regrouping.

Indices are 0-based throughout. The grouped terms (alpha, beta1, beta2,
gamma, delta) split the curvature triple sum by how many of the indices
belong to the distinguished pair (i, j). Direct phi sums are the reference
values; the closed reductions further down are cross-checked against them.
"""

import logging
import math
from typing import NamedTuple, Optional, Union

import numpy as np

from geometry.kernels import (
    DEFAULT_POLICY,
    kappa_fn,
    m2,
    m3,
    m4,
    phi,
    phi1,
    phi2,
    v_fn,
)
from geometry.states import spectral_decomposition
from models import (
    SUBTERM_EIGENVALUES,
    TERM_EIGENVALUES,
    BasisElement,
    CurvatureBreakdown,
    DensityMatrix,
    EvalPolicy,
    Spectrum,
    TangentVector,
)
from utils.errors import BoundaryError, UsageError
from utils.linalg import jacobi_eigh

logger = logging.getLogger(__name__)

MatrixLike = Union[TangentVector, np.ndarray]

# x/c below which the beta2 reduction switches to divided differences.
BETA2_SMALL_X = 1e-4


# =============================================================================
# Metric
# =============================================================================
def basis(n: int, real_only: bool = False) -> list[BasisElement]:
    """F_kl and H_kl for k < l (H omitted when real), then the diagonal F_kk."""
    if n < 1:
        raise UsageError("n must be at least 1")
    elements = []
    for k in range(n):
        for l in range(k + 1, n):  # noqa: E741
            f = np.zeros((n, n))
            f[k, l] = f[l, k] = 1.0
            elements.append(
                BasisElement(kind="F_offdiag", indices=(k, l), matrix=TangentVector(entries=f))
            )
            if not real_only:
                h = np.zeros((n, n), dtype=complex)
                h[k, l] = 1j
                h[l, k] = -1j
                elements.append(
                    BasisElement(kind="H_offdiag", indices=(k, l), matrix=TangentVector(entries=h))
                )
    for k in range(n):
        f = np.zeros((n, n))
        f[k, k] = 2.0
        elements.append(
            BasisElement(
                kind="F_diag",
                indices=(k, k),
                matrix=TangentVector(entries=f, traceless=False),
            )
        )
    return elements


def m2_table(values: np.ndarray, policy: EvalPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Matrix of m2(lambda_i, lambda_j)."""
    n = len(values)
    table = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            table[i, j] = table[j, i] = m2(values[i], values[j], policy)
    return table


def _entries(x: MatrixLike) -> np.ndarray:
    return x.entries if isinstance(x, TangentVector) else np.asarray(x)


def kubo_mori(
    d: DensityMatrix,
    x: MatrixLike,
    y: MatrixLike,
    policy: EvalPolicy = DEFAULT_POLICY,
) -> float:
    """G_D(X, Y) = sum_ij m2(l_i, l_j) X~_ij Y~_ji in the eigenbasis of D."""
    xa, ya = _entries(x), _entries(y)
    if xa.shape != d.entries.shape or ya.shape != d.entries.shape:
        raise UsageError(
            f"dimension mismatch: state {d.entries.shape}, vectors {xa.shape} and {ya.shape}"
        )
    spectrum, u = spectral_decomposition(d)
    table = m2_table(spectrum.as_array(), policy)
    xt = u.conj().T @ xa @ u
    yt = u.conj().T @ ya @ u
    return float(np.sum(table * xt * yt.T).real)


def metric_gram(
    point: np.ndarray,
    directions: list[np.ndarray],
    policy: EvalPolicy = DEFAULT_POLICY,
) -> np.ndarray:
    """Gram matrix of the Kubo-Mori metric at a positive definite array."""
    w, u = jacobi_eigh(point)
    if w[-1] <= 0.0:
        raise BoundaryError(f"metric evaluated outside the positive cone (min eigenvalue {w[-1]:.3e})")
    table = m2_table(w, policy)
    rotated = np.array([u.conj().T @ direction @ u for direction in directions])
    gram = np.einsum("ij,aij,bji->ab", table, rotated, rotated).real
    return 0.5 * (gram + gram.T)


# =============================================================================
# Scalar Curvature
# =============================================================================
class CurvatureTables(NamedTuple):
    """Kernel tables of one spectrum."""

    values: np.ndarray
    m2: np.ndarray
    m3: np.ndarray
    phi: np.ndarray
    v: np.ndarray


def curvature_tables(s: Spectrum, policy: EvalPolicy = DEFAULT_POLICY) -> CurvatureTables:
    """phi and v on every index triple and pair of the spectrum."""
    lam = s.as_array()
    n = s.n
    t2 = m2_table(lam, policy)
    t3 = np.empty((n, n, n))
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                value = m3(lam[i], lam[j], lam[k], policy)
                for p, q, r in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
                    t3[p, q, r] = value

    first = 0.5 * t3**2 / (t2[:, :, None] * t2[None, :, :] * t2.T[:, None, :])
    idx = np.arange(n)
    # p[y, x] = m3(y, y, x) / m2(y, x)
    p = t3[idx, idx, :] / t2
    second = p.T[:, :, None] * p[None, :, :] / np.diag(t2)[None, :, None]
    phi_table = first - second

    v_table = np.empty((n, n))
    for k in range(n):
        for l in range(n):  # noqa: E741
            v_table[k, l] = v_fn(lam[k], lam[l], policy)
    return CurvatureTables(lam, t2, t3, phi_table, v_table)


def _scal_from_tables(tables: CurvatureTables) -> float:
    idx = np.arange(len(tables.values))
    off = tables.phi.copy()
    off[idx, idx, idx] = 0.0
    return math.fsum(off.ravel())


def _scal_real_from_tables(tables: CurvatureTables, scal_value: float) -> float:
    return 0.25 * scal_value + 0.25 * math.fsum(tables.v.ravel())


def scal(s: Spectrum, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Complex scalar curvature: phi summed over triples not all equal."""
    return _scal_from_tables(curvature_tables(s, policy))


def scal_real(s: Spectrum, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Real scalar curvature: scal/4 plus a quarter of v over all pairs."""
    tables = curvature_tables(s, policy)
    return _scal_real_from_tables(tables, _scal_from_tables(tables))


def scal_pair(s: Spectrum, policy: EvalPolicy = DEFAULT_POLICY) -> tuple[float, float]:
    """(scal, scal_real) from one set of tables."""
    tables = curvature_tables(s, policy)
    value = _scal_from_tables(tables)
    return value, _scal_real_from_tables(tables, value)


def scal_naive(s: Spectrum, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Plain triple loop over the kernel phi, without tables."""
    lam = s.values
    n = s.n
    terms = [
        phi(lam[i], lam[j], lam[k], policy)
        for i in range(n)
        for j in range(n)
        for k in range(n)
        if not i == j == k
    ]
    return math.fsum(terms)


def v_sum(s: Spectrum, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Sum of v over all ordered pairs, diagonal included."""
    return math.fsum(v_fn(x, y, policy) for x in s.values for y in s.values)


# =============================================================================
# Decomposition
# =============================================================================
def decompose(
    s: Spectrum, i: int, j: int, policy: EvalPolicy = DEFAULT_POLICY
) -> CurvatureBreakdown:
    """Regroup the curvature sum around the eigenvalue pair (i, j)."""
    n = s.n
    if not (0 <= i < n and 0 <= j < n):
        raise UsageError(f"indices ({i}, {j}) out of range for n={n}")
    if i == j:
        raise UsageError("decomposition needs two distinct indices")
    a, b = s.values[i], s.values[j]
    if a < b:
        raise UsageError(f"pair must satisfy lambda_i >= lambda_j (got {a!r} < {b!r})")

    f = curvature_tables(s, policy).phi
    rest = [k for k in range(n) if k not in (i, j)]

    alpha = math.fsum(
        [f[i, i, j], f[j, i, i], f[j, j, i], f[i, j, j], f[i, j, i], f[j, i, j]]
    )
    beta1 = {
        k: math.fsum([f[i, i, k], f[k, i, i], f[j, j, k], f[k, j, j], f[i, k, i], f[j, k, j]])
        for k in rest
    }
    beta2 = {
        k: math.fsum([f[i, j, k], f[k, j, i], f[j, i, k], f[k, i, j], f[i, k, j], f[j, k, i]])
        for k in rest
    }
    gamma = {
        (k, l): math.fsum([f[i, k, l], f[j, k, l], f[k, i, l], f[k, j, l], f[k, l, i], f[k, l, j]])
        for k in rest
        for l in rest  # noqa: E741
    }
    delta_total = math.fsum(
        f[p, q, r] for p in rest for q in rest for r in rest if not p == q == r
    )
    total = math.fsum(
        [alpha, *beta1.values(), *beta2.values(), *gamma.values(), delta_total]
    )
    return CurvatureBreakdown(
        pair=(i, j),
        a=a,
        b=b,
        degenerate=(a == b),
        alpha=alpha,
        beta1=beta1,
        beta2=beta2,
        gamma=gamma,
        delta_total=delta_total,
        total=total,
    )


def link_breakdown(
    before: Spectrum, after: Spectrum, policy: EvalPolicy = DEFAULT_POLICY
) -> dict[str, object]:
    """Breakdowns of both ends of a two-point link and their group deltas."""
    if before.n != after.n:
        raise UsageError("link ends have different lengths")
    moved = [z for z, (x, y) in enumerate(zip(before.values, after.values)) if x != y]
    if len(moved) != 2:
        raise UsageError(f"link changes {len(moved)} eigenvalues, expected exactly two")
    i, j = moved
    first = decompose(before, i, j, policy)
    second = decompose(after, i, j, policy)
    return {
        "pair": (i, j),
        "before": first,
        "after": second,
        "delta": {
            "alpha": second.alpha - first.alpha,
            "beta1": {k: second.beta1[k] - first.beta1[k] for k in first.beta1},
            "beta2": {k: second.beta2[k] - first.beta2[k] for k in first.beta2},
            "gamma": {kl: second.gamma[kl] - first.gamma[kl] for kl in first.gamma},
            "delta_total": second.delta_total - first.delta_total,
            "total": second.total - first.total,
        },
    }


# =============================================================================
# Grouped Terms And Sub-sums
# =============================================================================
def alpha_term(a: float, b: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """2phi(a,a,b) + 2phi(b,b,a) + phi(a,b,a) + phi(b,a,b)."""
    return (
        2.0 * phi(a, a, b, policy)
        + 2.0 * phi(b, b, a, policy)
        + phi(a, b, a, policy)
        + phi(b, a, b, policy)
    )


def beta1_term(a: float, b: float, lam_k: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    return (
        2.0 * phi(a, a, lam_k, policy)
        + 2.0 * phi(b, b, lam_k, policy)
        + phi(a, lam_k, a, policy)
        + phi(b, lam_k, b, policy)
    )


def beta2_term(a: float, b: float, lam_k: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    return (
        2.0 * phi(a, b, lam_k, policy)
        + 2.0 * phi(b, a, lam_k, policy)
        + phi(a, lam_k, b, policy)
        + phi(b, lam_k, a, policy)
    )


def gamma_term(
    a: float, b: float, lam_k: float, lam_l: float, policy: EvalPolicy = DEFAULT_POLICY
) -> float:
    """Triples holding one of a, b together with lam_k then lam_l."""
    return math.fsum(
        [
            phi(a, lam_k, lam_l, policy),
            phi(b, lam_k, lam_l, policy),
            phi(lam_k, a, lam_l, policy),
            phi(lam_k, b, lam_l, policy),
            phi(lam_k, lam_l, a, policy),
            phi(lam_k, lam_l, b, policy),
        ]
    )


def v_pair_term(a: float, b: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    return v_fn(a, b, policy) + v_fn(b, a, policy)


def v_cross_term(a: float, b: float, lam_j: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    return (
        v_fn(a, lam_j, policy)
        + v_fn(b, lam_j, policy)
        + v_fn(lam_j, a, policy)
        + v_fn(lam_j, b, policy)
    )


def _subterm_value(
    name: str, a: float, b: float, k: Optional[float], l: Optional[float], policy: EvalPolicy  # noqa: E741
) -> float:
    if name == "alpha-aab":
        return phi(a, a, b, policy) + phi(b, b, a, policy)
    if name == "alpha-aba":
        return phi(a, b, a, policy) + phi(b, a, b, policy)
    if name == "beta1-aak":
        return phi(a, a, k, policy) + phi(b, b, k, policy)
    if name == "beta1-aka":
        return phi(a, k, a, policy) + phi(b, k, b, policy)
    if name == "beta1-aak-aka":
        return _subterm_value("beta1-aak", a, b, k, l, policy) + _subterm_value(
            "beta1-aka", a, b, k, l, policy
        )
    if name == "beta2-abk":
        return phi(a, b, k, policy) + phi(b, a, k, policy)
    if name == "beta2-akb":
        return phi(a, k, b, policy) + phi(b, k, a, policy)
    if name == "beta2-abk-akb":
        return _subterm_value("beta2-abk", a, b, k, l, policy) + _subterm_value(
            "beta2-akb", a, b, k, l, policy
        )
    if name == "gamma-kal":
        return phi(k, a, l, policy) + phi(k, b, l, policy)
    if name == "gamma-akl":
        return phi(a, k, l, policy) + phi(b, k, l, policy)
    # gamma-star
    return 2.0 * (phi(a, k, l, policy) + phi(b, k, l, policy)) + phi(k, a, l, policy) + phi(
        k, b, l, policy
    )


def _check_displacement(a: float, b: float, x: float) -> None:
    half = 0.5 * (a - b)
    if not (0.0 <= x <= half * (1.0 + 1e-12) + 1e-300):
        raise UsageError(f"displacement x={x!r} outside [0, {half!r}]")


def _check_eigenvalues(label: str, needed: int, lam_k: Optional[float], lam_l: Optional[float]) -> None:
    if needed >= 1 and lam_k is None:
        raise UsageError(f"{label} needs lam_k")
    if needed >= 2 and lam_l is None:
        raise UsageError(f"{label} needs lam_l")


def subterm(
    name: str,
    a: float,
    b: float,
    x: float,
    lam_k: Optional[float] = None,
    lam_l: Optional[float] = None,
    policy: EvalPolicy = DEFAULT_POLICY,
) -> float:
    """Named pair sub-sum evaluated at a - x and b + x."""
    if name not in SUBTERM_EIGENVALUES:
        raise UsageError(f"unknown sub-term {name!r}")
    _check_eigenvalues(name, SUBTERM_EIGENVALUES[name], lam_k, lam_l)
    _check_displacement(a, b, x)
    return _subterm_value(name, a - x, b + x, lam_k, lam_l, policy)


def grouped_term(
    term: str,
    a: float,
    b: float,
    x: float,
    lam_k: Optional[float] = None,
    lam_l: Optional[float] = None,
    subterm_name: Optional[str] = None,
    policy: EvalPolicy = DEFAULT_POLICY,
) -> float:
    """Any grouped term or named sub-sum at displacement x."""
    if term == "subterm":
        if subterm_name is None:
            raise UsageError("term 'subterm' needs a sub-term name")
        return subterm(subterm_name, a, b, x, lam_k, lam_l, policy)
    if term not in TERM_EIGENVALUES:
        raise UsageError(f"unknown term {term!r}")
    _check_eigenvalues(term, TERM_EIGENVALUES[term], lam_k, lam_l)
    _check_displacement(a, b, x)
    ap, bp = a - x, b + x
    if term == "alpha":
        return alpha_term(ap, bp, policy)
    if term == "beta1":
        return beta1_term(ap, bp, lam_k, policy)
    if term == "beta2":
        return beta2_term(ap, bp, lam_k, policy)
    if term == "gamma":
        return gamma_term(ap, bp, lam_k, lam_l, policy)
    if term == "v_pair":
        return v_pair_term(ap, bp, policy)
    return v_cross_term(ap, bp, lam_k, policy)


# =============================================================================
# Closed Reductions: alpha, beta1, v
# =============================================================================
def _near_one(c: float, policy: EvalPolicy) -> bool:
    return abs(c - 1.0) <= policy.closed_form_collar


def tau_alpha(c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """-(1 + c) * alpha(1, c); tau_alpha(1) = 3/2 and tau_alpha(c) = tau_alpha(1/c)."""
    if c <= 0.0:
        raise UsageError(f"tau_alpha needs c > 0, got {c!r}")
    if _near_one(c, policy):
        return -(1.0 + c) * alpha_term(1.0, c, policy)
    log_c = math.log(c)
    return (
        -0.5 * (1.0 + c) ** 2 / (1.0 - c) ** 2
        + (1.0 + c) * (1.0 + c * c) / (c * (c - 1.0) * log_c)
        - 0.5 * (1.0 + c) ** 2 / (c * log_c**2)
    )


def alpha_closed(a: float, b: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    return -tau_alpha(b / a, policy) / (a + b)


def tau_beta(c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """2phi(c,c,1) + phi(c,1,c); tau_beta(1) = -3/8."""
    if c <= 0.0:
        raise UsageError(f"tau_beta needs c > 0, got {c!r}")
    if _near_one(c, policy):
        return 2.0 * phi(c, c, 1.0, policy) + phi(c, 1.0, c, policy)
    log_c = math.log(c)
    return (
        -(2.0 * c - 3.0) / (2.0 * c * log_c**2)
        + 1.0 / (c * (1.0 - c) * log_c)
        + c / (2.0 * (1.0 - c) ** 2)
    )


def beta1_closed(a: float, b: float, lam_k: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    return (tau_beta(a / lam_k, policy) + tau_beta(b / lam_k, policy)) / lam_k


def tau1(c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """First concave part of tau_beta; tau1(1) = -1/6."""
    if c <= 0.0:
        raise UsageError(f"tau1 needs c > 0, got {c!r}")
    if _near_one(c, policy):
        m = m2(c, 1.0, policy)
        return -m4(c, 1.0, 1.0, 1.0, policy) / (2.0 * c * m * m)
    log_c = math.log(c)
    return (3.0 - c) / (4.0 * c * log_c**2) - 1.0 / (2.0 * c * (c - 1.0) * log_c)


def tau2(c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Second concave part; tau_beta = tau1 + tau2/2 and tau2(1) = -5/12."""
    if c <= 0.0:
        raise UsageError(f"tau2 needs c > 0, got {c!r}")
    if _near_one(c, policy):
        m = m2(c, 1.0, policy)
        p = m3(c, 1.0, 1.0, policy)
        q = m4(c, 1.0, 1.0, 1.0, policy)
        u = 1.0 - p
        e = c - 1.0
        numerator = 2.0 * q + 2.0 * u * u - 4.0 * p - 4.0 * e * u * p + 2.0 * e * e * p * p
        return numerator / (2.0 * c * m * m)
    log_c = math.log(c)
    return (
        (3.0 - 3.0 * c) / (2.0 * c * log_c**2)
        - 1.0 / (c * (c - 1.0) * log_c)
        + c / (1.0 - c) ** 2
    )


def v_pair_closed(lam_k: float, lam_l: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """v(lam_k, lam_l) + v(lam_l, lam_k) through kappa."""
    c = lam_k / lam_l
    return ((1.0 + c) * kappa_fn(c, policy) + (1.0 + 1.0 / c) * kappa_fn(1.0 / c, policy)) / (
        lam_k + lam_l
    )


# =============================================================================
# Closed Reductions: beta2 (lam_k = 1, a = c + x, b = c - x)
# =============================================================================
def _check_beta_args(x: float, c: float) -> None:
    if not (0.0 < x < c):
        raise UsageError(f"beta2 reduction needs 0 < x < c, got x={x!r}, c={c!r}")


def _log_ratio(x: float, c: float) -> float:
    """log(c + x) - log(c - x) without cancellation."""
    return math.log1p(2.0 * x / (c - x))


def t_beta(x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """(m2(c+x, 1)/m2(c-x, 1) - 1)/(x log((c+x)/(c-x))); odd-signed x allowed."""
    ax = abs(x)
    _check_beta_args(ax, c)
    upper, lower = c + x, c - x
    return (m2(upper, 1.0, policy) / m2(lower, 1.0, policy) - 1.0) / (
        ax * _log_ratio(ax, c)
    )


def w_beta(x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    _check_beta_args(x, c)
    return 0.5 * (t_beta(x, c, policy) + t_beta(-x, c, policy))


def q1_beta(x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    _check_beta_args(x, c)
    return -(phi1(c + x, policy) - phi1(c - x, policy)) / _log_ratio(x, c)


def q2_beta(x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    _check_beta_args(x, c)
    return (phi2(c + x, policy) - phi2(c - x, policy)) / (2.0 * x)


def q_beta(x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    return q1_beta(x, c, policy) + q2_beta(x, c, policy)


def r_beta(x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    _check_beta_args(x, c)
    return -phi2(c + x, policy) * phi2(c - x, policy)


def beta2_closed(x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """lam_k * beta2 at a = lam_k (c + x), b = lam_k (c - x)."""
    _check_beta_args(x, c)
    upper, lower = c + x, c - x
    if x / c < BETA2_SMALL_X:
        w = m3(upper, lower, 1.0, policy) ** 2 / (
            m2(upper, lower, policy) * m2(upper, 1.0, policy) * m2(lower, 1.0, policy)
        )
        q = -phi2(upper / lower, policy) * phi2(1.0 / lower, policy) / lower - phi2(
            lower / upper, policy
        ) * phi2(1.0 / upper, policy) / upper
        return 3.0 * w + 2.0 * q + 2.0 * r_beta(x, c, policy)
    return 3.0 * w_beta(x, c, policy) + 2.0 * q_beta(x, c, policy) + 2.0 * r_beta(x, c, policy)


def beta2_from_closed(a: float, b: float, lam_k: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """beta2_k(a, b) rebuilt from the reduction."""
    c = 0.5 * (a + b) / lam_k
    x = 0.5 * (a - b) / lam_k
    return beta2_closed(x, c, policy) / lam_k


def beta2_condition(index: int, x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Combination whose x-derivative must be negative for the given condition."""
    if index == 1:
        return w_beta(x, c, policy) + q_beta(x, c, policy)
    if index == 2:
        return 2.0 * w_beta(x, c, policy) + q1_beta(x, c, policy) + r_beta(x, c, policy)
    if index == 3:
        return q2_beta(x, c, policy)
    if index == 4:
        return r_beta(x, c, policy)
    raise UsageError(f"beta2 conditions are numbered 1 to 4, got {index!r}")


# =============================================================================
# Closed Reductions: gamma (lam_l = 1, u = x lam_l, lam_k = c lam_l)
# =============================================================================
def _check_gamma_args(x: float, c: float) -> None:
    if not (x > 0.0 and c > 0.0):
        raise UsageError(f"gamma reduction needs x > 0 and c > 0, got x={x!r}, c={c!r}")


def w_gamma(x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """m3(x,c,1)^2 / (m2(x,c) m2(c,1) m2(x,1)), through logarithms away from coincidences."""
    _check_gamma_args(x, c)
    collar = policy.closed_form_collar
    if abs(c - 1.0) <= collar or abs(x - 1.0) <= collar or abs(x / c - 1.0) <= collar:
        return m3(x, c, 1.0, policy) ** 2 / (
            m2(x, c, policy) * m2(c, 1.0, policy) * m2(x, 1.0, policy)
        )
    log_c = math.log(c)
    log_x = math.log(x)
    return (
        (log_c / (log_x - log_c) + (1.0 - c) / (x - c))
        * (log_c / log_x + (c - 1.0) / (1.0 - x))
        / ((c - 1.0) * log_c)
    )


def q_gamma(x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    _check_gamma_args(x, c)
    return phi1(c, policy) * phi2(x / c, policy)


def r_gamma(x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    _check_gamma_args(x, c)
    return -phi2(c / x, policy) * phi2(1.0 / x, policy) / x


def d_gamma(x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    _check_gamma_args(x, c)
    return phi2(c, policy) * phi2(x, policy)


def gamma_closed(x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """lam_l * [phi(u, lam_k, lam_l) + phi(lam_k, u, lam_l) + phi(lam_k, lam_l, u)]."""
    return (
        1.5 * w_gamma(x, c, policy)
        + q_gamma(x, c, policy)
        + r_gamma(x, c, policy)
        - d_gamma(x, c, policy)
    )


def gamma_from_closed(
    a: float, b: float, lam_k: float, lam_l: float, policy: EvalPolicy = DEFAULT_POLICY
) -> float:
    """gamma_kl(a, b) rebuilt from the reduction."""
    c = lam_k / lam_l
    return (gamma_closed(a / lam_l, c, policy) + gamma_closed(b / lam_l, c, policy)) / lam_l


def gamma_condition(index: int, x: float, c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Combination whose second x-derivative is tested for a negative sign.

    Index 0 is gamma_closed itself: concavity in x makes gamma_kl(a - x, b + x)
    increasing. Indices 1 and 2 split it as 3 (w/2) + q + r + (-d). Split 1
    is convex as x -> 0 for every c: there w'' ~ (c+1)/(c x^2 L^2) while
    d'' ~ phi2(c)/(x^2 L^2) with L = log(c/x) and phi2 < 1.
    """
    if index == 0:
        return gamma_closed(x, c, policy)
    w = 0.5 * w_gamma(x, c, policy)
    if index == 1:
        return 2.0 * w - d_gamma(x, c, policy)
    if index == 2:
        return w + q_gamma(x, c, policy) + r_gamma(x, c, policy)
    raise UsageError(f"gamma conditions are numbered 0 to 2, got {index!r}")


__all__ = [
    "CurvatureTables",
    "basis",
    "m2_table",
    "kubo_mori",
    "metric_gram",
    "curvature_tables",
    "scal",
    "scal_real",
    "scal_pair",
    "scal_naive",
    "v_sum",
    "decompose",
    "link_breakdown",
    "alpha_term",
    "beta1_term",
    "beta2_term",
    "gamma_term",
    "v_pair_term",
    "v_cross_term",
    "subterm",
    "grouped_term",
    "tau_alpha",
    "alpha_closed",
    "tau_beta",
    "beta1_closed",
    "tau1",
    "tau2",
    "v_pair_closed",
    "t_beta",
    "w_beta",
    "q1_beta",
    "q2_beta",
    "q_beta",
    "r_beta",
    "beta2_closed",
    "beta2_from_closed",
    "beta2_condition",
    "w_gamma",
    "q_gamma",
    "r_gamma",
    "d_gamma",
    "gamma_closed",
    "gamma_from_closed",
    "gamma_condition",
]
