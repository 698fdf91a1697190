"""Divided-difference and curvature kernel tests."""

import math

import pytest

from geometry.kernels import (
    kappa_fn,
    m2,
    m3,
    m4,
    m_k,
    phi,
    phi1,
    phi2,
    rho_fn,
    v_fn,
)
from models import EvalPolicy
from utils.errors import DomainError, UsageError

LOG_BRANCH = EvalPolicy(closed_form_collar=1e-4)
SERIES = EvalPolicy(rel_degeneracy_tol=5e-3, series_order=12)


def _ones_expansion(k: int, a: float) -> float:
    """m_k(1, ..., 1, 1 + a) as the power series sum (-a)^i / (k - 1 + i)."""
    return math.fsum((-a) ** i / (k - 1 + i) for i in range(120))


class TestDividedDifferences:
    """Test m2, m3 and m4."""

    def test_m2_diagonal(self):
        """Test that m2(x, x) = 1/x."""
        assert m2(0.25, 0.25) == 4.0

    def test_m2_log_quotient(self):
        """Test m2(1, e) = 1/(e - 1)."""
        assert m2(1.0, math.e) == pytest.approx(1.0 / (math.e - 1.0), rel=1e-15)

    def test_m3_triple_coincidence(self):
        """Test that m3(x, x, x) = 1/(2x^2)."""
        assert m3(0.5, 0.5, 0.5) == pytest.approx(2.0, rel=1e-14)

    def test_m4_quadruple_coincidence(self):
        """Test that m4(x, x, x, x) = 1/(3x^3)."""
        assert m4(2.0, 2.0, 2.0, 2.0) == pytest.approx(1.0 / 24.0, rel=1e-14)

    def test_exact_symmetry(self):
        """Test that argument order does not change a single bit."""
        assert m3(0.1, 0.7, 0.3) == m3(0.7, 0.3, 0.1) == m3(0.3, 0.1, 0.7)
        assert m4(0.1, 0.2, 0.3, 0.4) == m4(0.4, 0.1, 0.3, 0.2)

    def test_homogeneity(self):
        """Test that m_k(mu x) = mu^-(k-1) m_k(x)."""
        args = (0.2, 0.5, 0.9)
        assert m_k(*(3.0 * x for x in args)) == pytest.approx(m_k(*args) / 9.0, rel=1e-13)

    @pytest.mark.parametrize("a", [2e-6, 1e-5, 1e-3, 0.0201, 0.0202, 0.05, 0.3])
    def test_m3_against_expansion(self, a):
        """Test m3(1, 1, 1 + a) on both sides of the series window."""
        assert m3(1.0, 1.0, 1.0 + a) == pytest.approx(_ones_expansion(3, a), rel=1e-13)

    @pytest.mark.parametrize("a", [1e-4, 0.0404, 0.0405, 0.1, 0.5])
    def test_m4_against_expansion(self, a):
        """Test m4(1, 1, 1, 1 + a) on both sides of the series window."""
        assert m4(1.0, 1.0, 1.0, 1.0 + a) == pytest.approx(_ones_expansion(4, a), rel=1e-12)

    def test_policy_order_inside_window(self):
        """Test that a higher minimum series order gives the same m4."""
        args = (1.0, 1.001, 1.002, 1.003)
        assert m4(*args, policy=SERIES) == pytest.approx(m4(*args), rel=1e-14)

    def test_scaling_near_coincidence(self):
        """Test m3(mu x) = m3(x)/mu^2 for a relative gap just above the policy tolerance."""
        for mu in (1e-3, 1e3):
            scaled = m3(mu, mu, mu * (1.0 + 2e-6))
            assert scaled == pytest.approx(m3(1.0, 1.0, 1.0 + 2e-6) / mu**2, rel=1e-12)

    def test_monotone_in_each_argument(self):
        """Test that m3 decreases as one argument grows."""
        assert m3(0.2, 0.3, 0.4) > m3(0.2, 0.3, 0.5)

    def test_non_positive_argument(self):
        """Test that a zero argument raises DomainError."""
        with pytest.raises(DomainError):
            m2(0.0, 1.0)
        with pytest.raises(DomainError):
            m3(0.5, -0.1, 0.2)

    def test_infinite_argument(self):
        """Test that an infinite argument raises DomainError."""
        with pytest.raises(DomainError):
            m2(float("inf"), 1.0)

    def test_needs_two_arguments(self):
        """Test that m_k with one argument is a usage error."""
        with pytest.raises(UsageError):
            m_k(1.0)


class TestCurvatureKernels:
    """Test phi and v."""

    def test_phi_on_diagonal(self):
        """Test that phi(x, x, x) = -1/(8x)."""
        assert phi(0.25, 0.25, 0.25) == pytest.approx(-0.5, rel=1e-13)

    def test_v_on_diagonal(self):
        """Test that v(x, x) = -1/(8x)."""
        assert v_fn(0.5, 0.5) == pytest.approx(-0.25, rel=1e-13)

    def test_phi_outer_symmetry(self):
        """Test that phi is symmetric under swapping its outer arguments."""
        assert phi(0.1, 0.4, 0.7) == pytest.approx(phi(0.7, 0.4, 0.1), rel=1e-13)

    def test_phi_homogeneity(self):
        """Test that phi scales as 1/mu."""
        assert phi(0.3, 0.6, 0.9) == pytest.approx(3.0 * phi(0.9, 1.8, 2.7), rel=1e-12)

    def test_v_homogeneity(self):
        """Test that v scales as 1/mu."""
        assert v_fn(0.2, 0.7) == pytest.approx(2.0 * v_fn(0.4, 1.4), rel=1e-12)

    def test_phi_homogeneity_clustered(self):
        """Test the scaling of phi where two arguments nearly coincide."""
        args = (0.7637, 0.35641, 0.35644)
        for mu in (1e-3, 1e3):
            scaled = mu * phi(*(mu * x for x in args))
            assert scaled == pytest.approx(phi(*args), rel=1e-12)

    def test_homogeneity_random_points(self, rng):
        """Test the scaling laws of m3, phi and v over clustered random points."""
        for _ in range(200):
            x = 10.0 ** rng.uniform(-4.0, 4.0)
            y = x * (1.0 + 10.0 ** rng.uniform(-7.0, -1.0))
            z = 10.0 ** rng.uniform(-4.0, 4.0)
            # phi may pass near zero; its summands are bounded by a multiple of 1/min.
            floor = 1e-13 / min(x, y, z)
            for mu in (1e-3, 1e3):
                mx, my, mz = mu * x, mu * y, mu * z
                assert m3(mx, mx, my) == pytest.approx(m3(x, x, y) / mu**2, rel=1e-12)
                assert mu * v_fn(mx, my) == pytest.approx(v_fn(x, y), rel=1e-12)
                assert mu * phi(mx, my, mz) == pytest.approx(phi(x, y, z), rel=1e-12, abs=floor)


class TestNamedFunctions:
    """Test phi1, phi2, kappa and rho."""

    def test_phi1_at_one(self):
        """Test the removable value phi1(1) = -1/2."""
        assert phi1(1.0) == pytest.approx(-0.5, rel=1e-14)

    def test_phi2_at_one(self):
        """Test the removable value phi2(1) = 1/2."""
        assert phi2(1.0) == pytest.approx(0.5, rel=1e-14)

    @pytest.mark.parametrize("u", [1.03, 0.97])
    def test_phi1_collar_matches_logs(self, u):
        """Test that the collar branch equals the logarithmic formula."""
        assert phi1(u) == pytest.approx(phi1(u, LOG_BRANCH), rel=1e-10)

    @pytest.mark.parametrize("u", [1.03, 0.97])
    def test_phi2_collar_matches_logs(self, u):
        """Test that the collar branch equals the logarithmic formula."""
        assert phi2(u) == pytest.approx(phi2(u, LOG_BRANCH), rel=1e-10)

    @pytest.mark.parametrize("c", [0.2, 3.0, 40.0])
    def test_kappa_is_v(self, c):
        """Test that kappa(c) = v(c, 1)."""
        assert kappa_fn(c) == pytest.approx(v_fn(c, 1.0), rel=1e-10)

    @pytest.mark.parametrize("c", [0.2, 3.0, 40.0])
    def test_rho_is_v(self, c):
        """Test that rho(c) = v(1, c) = kappa(1/c)/c."""
        assert rho_fn(c) == pytest.approx(v_fn(1.0, c), rel=1e-10)
        assert rho_fn(c) == pytest.approx(kappa_fn(1.0 / c) / c, rel=1e-10)

    def test_kappa_collar_value(self):
        """Test that kappa(1) = v(1, 1) = -1/8."""
        assert kappa_fn(1.0) == pytest.approx(-0.125, rel=1e-13)
