"""Metric, scalar curvature, decomposition and closed reduction tests."""

import numpy as np
import pytest

from geometry.curvature import (
    alpha_closed,
    alpha_term,
    basis,
    beta1_closed,
    beta1_term,
    beta2_condition,
    beta2_from_closed,
    beta2_term,
    decompose,
    gamma_closed,
    gamma_condition,
    gamma_from_closed,
    gamma_term,
    grouped_term,
    kubo_mori,
    link_breakdown,
    metric_gram,
    scal,
    scal_naive,
    scal_pair,
    scal_real,
    subterm,
    tau1,
    tau2,
    tau_alpha,
    tau_beta,
    v_pair_closed,
    v_pair_term,
    v_sum,
)
from geometry.states import diagonal_state, random_tangent, random_unitary, t_transform
from models import EvalPolicy, Spectrum, TangentVector
from utils.errors import UsageError

LOG_BRANCH = EvalPolicy(closed_form_collar=1e-4)


class TestMetric:
    """Test the Kubo-Mori metric."""

    def test_basis_sizes(self):
        """Test the number of complex and real basis elements."""
        assert len(basis(3)) == 9
        assert len(basis(3, real_only=True)) == 6

    def test_basis_order(self):
        """Test that off-diagonal elements come first."""
        kinds = [element.kind for element in basis(2)]
        assert kinds == ["F_offdiag", "H_offdiag", "F_diag", "F_diag"]

    def test_offdiagonal_at_uniform(self):
        """Test G(F_01, F_01) = 4 at the uniform qubit."""
        f = basis(2)[0].matrix
        d = diagonal_state(Spectrum.uniform(2))
        assert kubo_mori(d, f, f) == pytest.approx(4.0)

    def test_diagonal_direction(self, qubit_spectrum):
        """Test G(X, X) = 1/a + 1/b for X = diag(1, -1)."""
        x = TangentVector(entries=np.diag([1.0, -1.0]))
        d = diagonal_state(qubit_spectrum)
        assert kubo_mori(d, x, x) == pytest.approx(1 / 0.7 + 1 / 0.3, rel=1e-14)

    def test_unitary_invariance(self, qutrit_spectrum, rng):
        """Test that rotating state and vectors together leaves G unchanged."""
        u = random_unitary(3, rng)
        x = random_tangent(3, rng)
        y = random_tangent(3, rng)
        plain = kubo_mori(diagonal_state(qutrit_spectrum), x, y)
        rotated = kubo_mori(
            diagonal_state(qutrit_spectrum, u),
            u @ x.entries @ u.conj().T,
            u @ y.entries @ u.conj().T,
        )
        assert rotated == pytest.approx(plain, rel=1e-12)

    def test_dimension_mismatch(self, qutrit_spectrum):
        """Test that vectors of the wrong size are a usage error."""
        with pytest.raises(UsageError):
            kubo_mori(diagonal_state(qutrit_spectrum), np.eye(2), np.eye(2))

    def test_gram_positive_definite(self, mixed_state):
        """Test that the Gram matrix on the basis is symmetric positive definite."""
        dirs = [element.matrix.entries for element in basis(3)]
        gram = metric_gram(mixed_state.entries, dirs)
        assert np.allclose(gram, gram.T)
        assert np.all(np.linalg.eigvalsh(gram) > 0.0)


class TestScalarCurvature:
    """Test Scal and Scal_R."""

    def test_uniform_qubit(self):
        """Test Scal = -3/2 and Scal_R = -5/8 at the uniform qubit."""
        value, real_value = scal_pair(Spectrum.uniform(2))
        assert value == pytest.approx(-1.5, rel=1e-13)
        assert real_value == pytest.approx(-0.625, rel=1e-13)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_uniform_law(self, n):
        """Test Scal = -n^2 (n^2 - 1)/8 at the uniform state."""
        assert scal(Spectrum.uniform(n)) == pytest.approx(-(n**2) * (n**2 - 1) / 8.0, rel=1e-12)

    def test_tables_match_naive_loop(self, qutrit_spectrum):
        """Test the table evaluation against the plain triple loop."""
        assert scal(qutrit_spectrum) == pytest.approx(scal_naive(qutrit_spectrum), rel=1e-12)

    def test_real_relation(self, rng):
        """Test Scal_R = Scal/4 + (sum v)/4 on random spectra."""
        from geometry.states import sample_spectrum

        for n in (2, 3, 6):
            s = sample_spectrum(n, rng)
            expected = 0.25 * scal(s) + 0.25 * v_sum(s)
            assert scal_real(s) == pytest.approx(expected, rel=1e-12)

    def test_homogeneous_degree(self, qutrit_spectrum):
        """Test that scaling all eigenvalues by mu scales phi sums by 1/mu."""
        from geometry.kernels import phi

        lam = qutrit_spectrum.values
        direct = sum(
            phi(2 * lam[i], 2 * lam[j], 2 * lam[k])
            for i in range(3)
            for j in range(3)
            for k in range(3)
            if not i == j == k
        )
        assert direct == pytest.approx(0.5 * scal(qutrit_spectrum), rel=1e-12)

    def test_nearly_degenerate_spectrum(self):
        """Test that a near-degenerate spectrum is close to the degenerate value."""
        near = Spectrum(values=(0.5 + 1e-9, 0.5 - 1e-9))
        assert scal(near) == pytest.approx(-1.5, rel=1e-7)

    def test_monotone_on_qubit_link(self, qubit_spectrum):
        """Test that a T-transform towards uniform increases both curvatures."""
        mixed = t_transform(qubit_spectrum, 0, 1, 0.8)
        before, after = scal_pair(qubit_spectrum), scal_pair(mixed)
        assert after[0] > before[0]
        assert after[1] > before[1]


class TestDecomposition:
    """Test the regrouping around an eigenvalue pair."""

    def test_total_matches_scal(self):
        """Test that the regrouped total equals Scal."""
        s = Spectrum(values=(0.4, 0.3, 0.2, 0.1))
        breakdown = decompose(s, 0, 2)
        assert breakdown.total == pytest.approx(scal(s), rel=1e-12)
        assert set(breakdown.beta1) == {1, 3}
        assert set(breakdown.gamma) == {(1, 1), (1, 3), (3, 1), (3, 3)}

    def test_groups_match_grouped_terms(self):
        """Test each group against its grouped term at x = 0."""
        s = Spectrum(values=(0.4, 0.3, 0.2, 0.1))
        a, b, k, l = s.values[0], s.values[1], s.values[2], s.values[3]  # noqa: E741
        breakdown = decompose(s, 0, 1)
        assert breakdown.alpha == pytest.approx(alpha_term(a, b), rel=1e-12)
        assert breakdown.beta1[2] == pytest.approx(beta1_term(a, b, k), rel=1e-12)
        assert breakdown.beta2[2] == pytest.approx(beta2_term(a, b, k), rel=1e-12)
        assert breakdown.gamma[(2, 3)] == pytest.approx(gamma_term(a, b, k, l), rel=1e-12)

    def test_two_level_is_alpha_only(self, qubit_spectrum):
        """Test that for n = 2 the whole curvature is the alpha group."""
        breakdown = decompose(qubit_spectrum, 0, 1)
        assert breakdown.beta1 == {}
        assert breakdown.delta_total == 0.0
        assert breakdown.alpha == pytest.approx(scal(qubit_spectrum), rel=1e-12)

    def test_degenerate_pair_flag(self):
        """Test that equal eigenvalues are flagged."""
        breakdown = decompose(Spectrum(values=(0.4, 0.4, 0.2)), 0, 1)
        assert breakdown.degenerate

    def test_bad_indices(self, qutrit_spectrum):
        """Test index validation."""
        with pytest.raises(UsageError):
            decompose(qutrit_spectrum, 0, 0)
        with pytest.raises(UsageError):
            decompose(qutrit_spectrum, 0, 3)
        with pytest.raises(UsageError):
            decompose(qutrit_spectrum, 2, 0)

    def test_link_breakdown(self, qutrit_spectrum):
        """Test that a link is split around the two moved eigenvalues."""
        after = t_transform(qutrit_spectrum, 0, 2, 0.8)
        link = link_breakdown(qutrit_spectrum, after)
        assert link["pair"] == (0, 2)
        assert link["delta"]["total"] == pytest.approx(scal(after) - scal(qutrit_spectrum), rel=1e-10)

    def test_link_breakdown_needs_two_moves(self, qutrit_spectrum):
        """Test that a link moving no eigenvalues is rejected."""
        with pytest.raises(UsageError):
            link_breakdown(qutrit_spectrum, qutrit_spectrum)


class TestGroupedTerms:
    """Test grouped terms and named sub-sums."""

    def test_grouped_term_at_zero(self):
        """Test that x = 0 evaluates at the pair itself."""
        assert grouped_term("beta1", 0.5, 0.2, 0.0, lam_k=0.1) == beta1_term(0.5, 0.2, 0.1)

    def test_grouped_term_shift(self):
        """Test that displacement x evaluates at a - x and b + x."""
        assert grouped_term("alpha", 0.5, 0.2, 0.1) == pytest.approx(alpha_term(0.4, 0.3), rel=1e-12)

    def test_v_pair(self):
        """Test that the v pair term is reachable as a grouped term."""
        assert grouped_term("v_pair", 0.5, 0.2, 0.0) == v_pair_term(0.5, 0.2)

    def test_missing_eigenvalue(self):
        """Test that gamma without lam_l is a usage error."""
        with pytest.raises(UsageError):
            grouped_term("gamma", 0.5, 0.2, 0.0, lam_k=0.1)

    def test_displacement_range(self):
        """Test that x beyond (a - b)/2 is a usage error."""
        with pytest.raises(UsageError):
            grouped_term("alpha", 0.5, 0.2, 0.2)

    def test_subterm_parts_add_up(self):
        """Test that the combined beta1 sub-sum is the sum of its parts."""
        combined = subterm("beta1-aak-aka", 0.5, 0.2, 0.05, lam_k=0.1)
        parts = subterm("beta1-aak", 0.5, 0.2, 0.05, lam_k=0.1) + subterm(
            "beta1-aka", 0.5, 0.2, 0.05, lam_k=0.1
        )
        assert combined == pytest.approx(parts, rel=1e-14)

    def test_gamma_star_weighting(self):
        """Test gamma-star = gamma-kal + 2 gamma-akl."""
        args = (0.5, 0.2, 0.05)
        star = subterm("gamma-star", *args, lam_k=0.3, lam_l=0.01)
        kal = subterm("gamma-kal", *args, lam_k=0.3, lam_l=0.01)
        akl = subterm("gamma-akl", *args, lam_k=0.3, lam_l=0.01)
        assert star == pytest.approx(kal + 2.0 * akl, rel=1e-13)

    def test_unknown_subterm(self):
        """Test that an unknown sub-term name is a usage error."""
        with pytest.raises(UsageError):
            subterm("delta-xyz", 0.5, 0.2, 0.0)

    def test_alpha_increases_along_x(self):
        """Test that alpha increases as a and b approach each other."""
        values = [grouped_term("alpha", 0.6, 0.1, x) for x in np.linspace(0.0, 0.25, 11)]
        assert all(v2 > v1 for v1, v2 in zip(values, values[1:]))


class TestClosedReductions:
    """Test closed reductions against direct phi sums."""

    def test_tau_alpha_values(self):
        """Test tau_alpha(1) = 3/2 and the inversion symmetry."""
        assert tau_alpha(1.0) == pytest.approx(1.5, rel=1e-13)
        assert tau_alpha(0.2) == pytest.approx(tau_alpha(5.0), rel=1e-12)

    def test_tau_beta_split(self):
        """Test tau_beta = tau1 + tau2/2 and the values at one."""
        assert tau_beta(1.0) == pytest.approx(-0.375, rel=1e-13)
        assert tau1(1.0) == pytest.approx(-1.0 / 6.0, rel=1e-12)
        assert tau2(1.0) == pytest.approx(-5.0 / 12.0, rel=1e-12)
        for c in (0.3, 3.0, 20.0):
            assert tau_beta(c) == pytest.approx(tau1(c) + 0.5 * tau2(c), rel=1e-12)

    @pytest.mark.parametrize("c", [1.03, 0.97])
    def test_collar_branches_agree(self, c):
        """Test that collar and logarithmic branches give the same values."""
        for fn in (tau_alpha, tau_beta, tau1, tau2):
            assert fn(c) == pytest.approx(fn(c, LOG_BRANCH), rel=1e-8)

    @pytest.mark.parametrize(
        "a,b,k,l",
        [(0.5, 0.2, 0.1, 0.05), (0.9, 0.001, 0.3, 0.6), (0.01, 0.002, 0.5, 1e-4)],
    )
    def test_closed_forms_match_direct(self, a, b, k, l):  # noqa: E741
        """Test every closed reduction against its direct sum."""
        assert alpha_closed(a, b) == pytest.approx(alpha_term(a, b), rel=1e-9)
        assert beta1_closed(a, b, k) == pytest.approx(beta1_term(a, b, k), rel=1e-9)
        assert beta2_from_closed(a, b, k) == pytest.approx(beta2_term(a, b, k), rel=1e-9)
        assert gamma_from_closed(a, b, k, l) == pytest.approx(gamma_term(a, b, k, l), rel=1e-9)
        assert v_pair_closed(a, b) == pytest.approx(v_pair_term(a, b), rel=1e-9)

    def test_condition_indices(self):
        """Test that unknown condition numbers are usage errors."""
        with pytest.raises(UsageError):
            beta2_condition(5, 0.5, 1.0)
        with pytest.raises(UsageError):
            gamma_condition(3, 0.5, 1.0)

    @pytest.mark.parametrize("x,c", [(0.05, 0.1), (0.3, 2.0), (40.0, 7.0)])
    def test_gamma_splits_sum_to_reduction(self, x, c):
        """Test that the two split conditions add up to gamma_closed."""
        split = gamma_condition(1, x, c) + gamma_condition(2, x, c)
        assert split == pytest.approx(gamma_condition(0, x, c), rel=1e-12)
        assert gamma_condition(0, x, c) == gamma_closed(x, c)

    def test_gamma_split_one_convex_near_zero(self):
        """Test that split 1 curves up while the full reduction curves down at small x."""
        x, c = 1e-3, 2.0
        h = 1e-3 * x

        def second(index: int) -> float:
            values = [gamma_condition(index, x + s * h, c) for s in (1.0, 0.0, -1.0)]
            return (values[0] - 2.0 * values[1] + values[2]) / (h * h)

        assert second(1) > 0.0
        assert second(0) < 0.0

    def test_beta2_condition_four_decreasing(self):
        """Test that r_beta decreases in x for a sample c."""
        values = [beta2_condition(4, x, 2.0) for x in (0.2, 0.6, 1.0, 1.4)]
        assert all(v2 < v1 for v1, v2 in zip(values, values[1:]))
