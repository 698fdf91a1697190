"""Divided differences of log and the curvature integrands built on them.

Every kernel is homogeneous: m_k scales as mu^-(k-1), phi and v as mu^-1.
Arguments are sorted before evaluation so that results are exactly
symmetric. When the relative spread of the arguments is below
``policy.rel_degeneracy_tol``, or below the order-dependent series window,
the kernel is summed from its expansion around the mean argument;
otherwise the divided-difference recursion is used down to the two-point
logarithmic quotient. Outside the window the recursion loses at most
about eps/spread^(k-2) to cancellation.
"""

import logging
import math
import sys

from models import EvalPolicy
from utils.errors import DomainError, UsageError

logger = logging.getLogger(__name__)

DEFAULT_POLICY = EvalPolicy()
HARNESS_POLICY = EvalPolicy(rel_degeneracy_tol=5e-3, series_order=12)

# Relative spread per order above two below which m_k is always summed as a series.
SERIES_WINDOW = 2e-2
SERIES_TRUNCATION = sys.float_info.epsilon / 8.0
MAX_SERIES_ORDER = 60


def _check_positive(*args: float) -> None:
    for x in args:
        if not (x > 0.0 and math.isfinite(x)):
            raise DomainError(f"kernel arguments must be positive and finite, got {x!r}")


def _series_order(k: int, spread: float, minimum: int) -> int:
    """Smallest order whose first dropped term is below SERIES_TRUNCATION."""
    order = minimum
    while (
        order < MAX_SERIES_ORDER
        and math.comb(order + k, k - 1) * spread ** (order + 1) > SERIES_TRUNCATION
    ):
        order += 1
    return order


def _series(xs: tuple[float, ...], order: int) -> float:
    """m_k summed from complete homogeneous polynomials of the offsets."""
    k = len(xs)
    mu = math.fsum(xs) / k
    h = [1.0] + [0.0] * order
    for x in xs:
        s = (x - mu) / mu
        for j in range(1, order + 1):
            h[j] += s * h[j - 1]
    total = math.fsum((-1) ** j * h[j] / (j + k - 1) for j in range(order + 1))
    return total / mu ** (k - 1)


def _log_quotient(lo: float, hi: float) -> float:
    if lo == hi:
        return 1.0 / lo
    if 0.5 <= hi / lo <= 2.0:
        return math.log1p((hi - lo) / lo) / (hi - lo)
    return (math.log(hi) - math.log(lo)) / (hi - lo)


def _m_sorted(xs: tuple[float, ...], policy: EvalPolicy) -> float:
    k = len(xs)
    lo, hi = xs[0], xs[-1]
    spread = (hi - lo) / (math.fsum(xs) / k)
    if spread <= max(policy.rel_degeneracy_tol, SERIES_WINDOW * (k - 2)):
        return _series(xs, _series_order(k, spread, policy.series_order))
    if k == 2:
        return _log_quotient(lo, hi)
    return (_m_sorted(xs[:-1], policy) - _m_sorted(xs[1:], policy)) / (hi - lo)


# =============================================================================
# Divided Differences
# =============================================================================
def m_k(*args: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Divided difference of log of order len(args) - 1.

    Equals the integral of prod 1/(x_i + t) over t in [0, inf).
    """
    if len(args) < 2:
        raise UsageError("m_k needs at least two arguments")
    _check_positive(*args)
    return _m_sorted(tuple(sorted(float(x) for x in args)), policy)


def m2(x: float, y: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """(log x - log y)/(x - y), equal to 1/x on the diagonal."""
    return m_k(x, y, policy=policy)


def m3(x: float, y: float, z: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Second divided difference of log, 1/(2x^2) at a triple coincidence."""
    return m_k(x, y, z, policy=policy)


def m4(x: float, y: float, z: float, w: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Third divided difference of log, 1/(3x^3) at a quadruple coincidence."""
    return m_k(x, y, z, w, policy=policy)


# =============================================================================
# Curvature Integrands
# =============================================================================
def phi(x: float, y: float, z: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Summand of the complex scalar curvature; phi(x, x, x) = -1/(8x)."""
    _check_positive(x, y, z)
    first = 0.5 * m3(x, y, z, policy) ** 2 / (
        m2(x, y, policy) * m2(y, z, policy) * m2(z, x, policy)
    )
    second = (
        m3(y, y, x, policy)
        * m3(y, y, z, policy)
        / (m2(y, x, policy) * m2(y, y, policy) * m2(y, z, policy))
    )
    return first - second


def v_fn(x: float, y: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Pair summand of the real scalar curvature; v(x, x) = -1/(8x)."""
    _check_positive(x, y)
    mxy = m2(x, y, policy)
    mxxy = m3(x, x, y, policy)
    first = 0.5 * mxxy**2 / (mxy**2 * m2(x, x, policy))
    second = mxxy * m3(y, y, x, policy) / (mxy**2 * m2(y, y, policy))
    return first - second


# =============================================================================
# Named Scalar Functions
# =============================================================================
def _in_collar(u: float, policy: EvalPolicy) -> bool:
    return abs(u - 1.0) <= policy.closed_form_collar


def phi1(u: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """1/(u log u) + 1/(1 - u), with phi1(1) = -1/2."""
    _check_positive(u)
    if _in_collar(u, policy):
        return -m3(u, u, 1.0, policy) / m2(u, 1.0, policy)
    return 1.0 / (u * math.log(u)) + 1.0 / (1.0 - u)


def phi2(u: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """1/log u + 1/(1 - u), with phi2(1) = 1/2."""
    _check_positive(u)
    if _in_collar(u, policy):
        return m3(u, 1.0, 1.0, policy) / m2(u, 1.0, policy)
    return 1.0 / math.log(u) + 1.0 / (1.0 - u)


def kappa_fn(c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """v(c, 1) written through logarithms."""
    _check_positive(c)
    if _in_collar(c, policy):
        return v_fn(c, 1.0, policy)
    log_c = math.log(c)
    return (
        3.0 / (2.0 * c * log_c**2)
        - (2.0 * c + 1.0) / (c * (c - 1.0) * log_c)
        + (c + 2.0) / (2.0 * (c - 1.0) ** 2)
    )


def rho_fn(c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """v(1, c) written through logarithms; rho(c) = kappa(1/c)/c."""
    _check_positive(c)
    if _in_collar(c, policy):
        return v_fn(1.0, c, policy)
    log_c = math.log(c)
    return (
        3.0 / (2.0 * log_c**2)
        - (c + 2.0) / ((c - 1.0) * log_c)
        + (1.0 + 2.0 * c) / (2.0 * (1.0 - c) ** 2)
    )


__all__ = [
    "DEFAULT_POLICY",
    "HARNESS_POLICY",
    "m_k",
    "m2",
    "m3",
    "m4",
    "phi",
    "v_fn",
    "phi1",
    "phi2",
    "kappa_fn",
    "rho_fn",
]
