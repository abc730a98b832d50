"""State vector primitives: construction, phases, exponentials, measurement statistics."""

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from cqaoa import (DiagonalCost, KrylovConvergenceError, QuantumState, SparseHermitian,
                   apply_cost_phase, apply_hermitian_exponential, basis_state, distribution,
                   expectation, format_bits, parse_bits, uniform_state_over)
from conftest import SETPACK4, SETPACK4_OMEGA, random_sparse_hermitian, random_state

from cqaoa import feasible_set


def edge_op(n, a, b, value=1.0):
    return SparseHermitian(n, np.array([a, b]), np.array([b, a]), np.array([value, value]))


class TestConstruction:
    def test_norm_enforced(self):
        with pytest.raises(ValueError, match="norm"):
            QuantumState(2, np.array([1.0, 1.0, 0, 0]))

    def test_length_enforced(self):
        with pytest.raises(ValueError, match="length"):
            QuantumState(2, np.array([1.0, 0, 0]))

    def test_amplitudes_read_only(self):
        state = basis_state(0, 2)
        with pytest.raises(ValueError):
            state.amplitudes[0] = 0.0

    def test_cost_weights_must_be_finite(self):
        with pytest.raises(ValueError, match="finite"):
            DiagonalCost(1, np.array([0.0, np.inf]))

    def test_sparse_hermitian_rejects_asymmetry(self):
        with pytest.raises(ValueError, match="symmetric"):
            SparseHermitian(2, np.array([0]), np.array([1]), np.array([1.0]))

    def test_sparse_hermitian_rejects_duplicates(self):
        with pytest.raises(ValueError, match="duplicate"):
            SparseHermitian(2, np.array([0, 1, 0, 1]), np.array([1, 0, 1, 0]),
                            np.array([1.0, 1.0, 1.0, 1.0]))

    def test_sparse_hermitian_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="indices"):
            SparseHermitian(1, np.array([0, 2]), np.array([2, 0]), np.array([1.0, 1.0]))


class TestUniformState:
    def test_two_member_support(self):
        state = uniform_state_over({0b0011, 0b0101}, 4)
        assert state.amplitudes[0b0011] == pytest.approx(1 / np.sqrt(2))
        assert state.amplitudes[0b0101] == pytest.approx(1 / np.sqrt(2))
        assert np.count_nonzero(state.amplitudes) == 2

    def test_singleton_is_basis_state(self):
        state = uniform_state_over({5}, 3)
        expected = np.zeros(8, dtype=complex)
        expected[5] = 1.0
        assert np.array_equal(state.amplitudes, expected)

    def test_uniform_over_set_packing_feasible_set(self):
        omega = feasible_set(SETPACK4)
        assert list(omega) == SETPACK4_OMEGA
        state = uniform_state_over(omega.members, 4)
        np.testing.assert_allclose(state.amplitudes[omega.members], 1 / np.sqrt(10))

    def test_empty_support_rejected(self):
        with pytest.raises(ValueError, match="empty initial support"):
            uniform_state_over(set(), 3)


class TestCostPhase:
    def test_gamma_zero_is_identity(self):
        state = uniform_state_over({0, 3}, 2)
        cost = DiagonalCost(2, np.array([1.0, 2.0, 3.0, 4.0]))
        assert np.array_equal(apply_cost_phase(state, 0.0, cost).amplitudes, state.amplitudes)

    def test_pi_weight_flips_sign(self):
        state = uniform_state_over({0, 1}, 1)
        cost = DiagonalCost(1, np.array([0.0, np.pi]))
        out = apply_cost_phase(state, 1.0, cost)
        assert out.amplitudes[0] == pytest.approx(1 / np.sqrt(2))
        assert out.amplitudes[1] == pytest.approx(-1 / np.sqrt(2))

    def test_constant_weights_are_global_phase(self, rng):
        state = random_state(rng, 3)
        cost = DiagonalCost(3, np.full(8, 2.5))
        out = apply_cost_phase(state, 0.7, cost)
        np.testing.assert_allclose(out.amplitudes, np.exp(-1j * 0.7 * 2.5) * state.amplitudes,
                                   atol=1e-15)
        np.testing.assert_allclose(out.probabilities(), state.probabilities(), atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            apply_cost_phase(basis_state(0, 2), 1.0, DiagonalCost(3, np.zeros(8)))

    @given(shift=st.floats(-10, 10), gamma=st.floats(-5, 5))
    @settings(max_examples=30, deadline=None)
    def test_phase_covariance(self, shift, gamma):
        rng = np.random.default_rng(7)
        state = random_state(rng, 3)
        weights = rng.uniform(-2, 2, 8)
        out_a = apply_cost_phase(state, gamma, DiagonalCost(3, weights))
        out_b = apply_cost_phase(state, gamma, DiagonalCost(3, weights + shift))
        np.testing.assert_allclose(out_b.amplitudes, np.exp(-1j * gamma * shift) * out_a.amplitudes,
                                   atol=1e-13)
        np.testing.assert_allclose(out_a.probabilities(), out_b.probabilities(), atol=1e-12)


class TestHermitianExponential:
    def test_beta_zero_is_identity(self, rng):
        state = random_state(rng, 3)
        op = random_sparse_hermitian(rng, 3)
        assert apply_hermitian_exponential(state, 0.0, op) is state

    def test_single_edge_rabi_rotation(self):
        beta = 0.37
        state = basis_state(2, 3)
        out = apply_hermitian_exponential(state, beta, edge_op(3, 2, 5))
        expected = np.zeros(8, dtype=complex)
        expected[2] = np.cos(beta)
        expected[5] = -1j * np.sin(beta)
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-14)

    def test_matches_expm_oracle(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 7))
            op = random_sparse_hermitian(rng, n)
            state = random_state(rng, n)
            beta = float(rng.uniform(-2 * np.pi, 2 * np.pi))
            got = apply_hermitian_exponential(state, beta, op)
            oracle = scipy.linalg.expm(-1j * beta * op.dense()) @ state.amplitudes
            np.testing.assert_allclose(got.amplitudes, oracle, atol=1e-10)

    def test_krylov_route_matches_dense(self, rng):
        for _ in range(10):
            n = int(rng.integers(5, 8))
            op = random_sparse_hermitian(rng, n)
            state = random_state(rng, n)
            beta = float(rng.uniform(-2 * np.pi, 2 * np.pi))
            dense = apply_hermitian_exponential(state, beta, op, method="dense")
            krylov = apply_hermitian_exponential(state, beta, op, method="krylov")
            np.testing.assert_allclose(krylov.amplitudes, dense.amplitudes, atol=1e-10)

    def test_krylov_nonconvergence_names_tolerance(self):
        state = basis_state(0, 2)
        with pytest.raises(KrylovConvergenceError, match="1e-12"):
            apply_hermitian_exponential(state, 2.0, edge_op(2, 0, 1), method="krylov",
                                        krylov_dim=1)

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError, match="method"):
            apply_hermitian_exponential(basis_state(0, 1), 1.0, edge_op(1, 0, 1), method="magic")

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError, match="mismatch"):
            apply_hermitian_exponential(basis_state(0, 2), 1.0, edge_op(3, 0, 1))

    def test_unitarity_over_random_sequences(self, rng):
        for _ in range(15):
            n = int(rng.integers(2, 6))
            state = random_state(rng, n)
            cost = DiagonalCost(n, rng.uniform(-3, 3, 1 << n))
            op = random_sparse_hermitian(rng, n)
            for _ in range(int(rng.integers(1, 6))):
                state = apply_cost_phase(state, float(rng.uniform(-3, 3)), cost)
                state = apply_hermitian_exponential(state, float(rng.uniform(-3, 3)), op)
            assert abs(np.linalg.norm(state.amplitudes) - 1.0) <= 1e-12

    def test_support_confinement(self, rng):
        # operator with one block on {0,1,2} and another on {5,6}; no coupling between them
        n = 3
        rows = np.array([0, 1, 1, 2, 5, 6])
        cols = np.array([1, 0, 2, 1, 6, 5])
        vals = np.ones(6)
        op = SparseHermitian(n, rows, cols, vals)
        amp = np.zeros(8, dtype=complex)
        inner = rng.normal(size=3) + 1j * rng.normal(size=3)
        amp[[0, 1, 2]] = inner / np.linalg.norm(inner)
        state = QuantumState(n, amp)
        out = apply_hermitian_exponential(state, 1.234, op)
        outside = out.probabilities()[[3, 4, 5, 6, 7]]
        assert np.all(outside <= 1e-18)


class TestExpectationAndDistribution:
    def test_basis_state_expectation(self):
        cost = DiagonalCost(2, np.array([5.0, -1.0, 2.0, 0.5]))
        assert expectation(basis_state(2, 2), cost) == 2.0

    def test_uniform_pair_expectation_is_mean(self):
        cost = DiagonalCost(2, np.array([5.0, -1.0, 2.0, 0.5]))
        assert expectation(uniform_state_over({0, 1}, 2), cost) == pytest.approx(2.0)

    def test_zero_weights(self, rng):
        assert expectation(random_state(rng, 3), DiagonalCost(3, np.zeros(8))) == 0.0

    def test_distribution_of_basis_state(self):
        assert distribution(basis_state(0, 3)) == {0: 1.0}

    def test_distribution_uniform_four(self):
        dist = distribution(uniform_state_over({1, 4, 9, 12}, 4))
        assert set(dist) == {1, 4, 9, 12}
        for p in dist.values():
            assert p == pytest.approx(0.25)

    def test_distribution_floor(self):
        amp = np.zeros(4, dtype=complex)
        amp[0] = np.sqrt(1 - 1e-14)
        amp[3] = np.sqrt(1e-14)
        dist = distribution(QuantumState(2, amp))
        assert 3 not in dist and 0 in dist
        assert 3 in distribution(QuantumState(2, amp), floor=1e-15)

    def test_distribution_sums_to_one(self, rng):
        dist = distribution(random_state(rng, 5))
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-10)


def test_format_and_parse_bits():
    assert format_bits(0b0111, 4) == "0111"
    assert format_bits(837, 10) == "1101000101"
    assert parse_bits("1101000101") == 837
