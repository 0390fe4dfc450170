import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from belltopo.chsh import (
    BudgetTooSmall,
    MeasurementSettings,
    OptimizerBudget,
    TSIRELSON_BOUND,
    UnnormalizedSetting,
    chsh_value,
    chsh_value_from_correlations,
    horodecki_bfv,
    maximize_chsh,
    optimal_settings,
    _sym3_eigvals,
)
from belltopo.qubit_state import TwoQubitState, correlation_matrix, random_state
from conftest import diagonal_state, unit_vector

Z = np.array([0.0, 0.0, 1.0])
X = np.array([1.0, 0.0, 0.0])
SQRT2 = math.sqrt(2.0)

TSIRELSON_SETTINGS = MeasurementSettings(Z, X, (Z + X) / SQRT2, (Z - X) / SQRT2)


def random_settings(rng):
    return MeasurementSettings(*(unit_vector(rng) for _ in range(4)))


class TestChshValue:
    def test_bell_state_tsirelson_settings(self, bell_state):
        assert chsh_value(bell_state, TSIRELSON_SETTINGS) == pytest.approx(
            2.0 * SQRT2, abs=1e-12
        )

    def test_ket00_all_z(self, ket00_state):
        s = MeasurementSettings(Z, Z, Z, Z)
        assert chsh_value(ket00_state, s) == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(6))
    def test_repeated_settings_give_twice_q11(self, seed):
        # a1 = a2 and b1 = b2 collapse the combination to Q + Q + Q - Q = 2 Q11.
        rng = np.random.default_rng(seed)
        state = random_state(seed)
        a, b = unit_vector(rng), unit_vector(rng)
        s = MeasurementSettings(a, a, b, b)
        one = MeasurementSettings(a, a, b, b)
        q11 = chsh_value(state, one) / 2.0
        assert chsh_value(state, s) == pytest.approx(2.0 * q11, abs=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_trace_and_correlation_paths_agree(self, seed):
        rng = np.random.default_rng(1000 + seed)
        state = random_state(seed)
        s = random_settings(rng)
        via_trace = chsh_value(state, s)
        via_corr = chsh_value_from_correlations(correlation_matrix(state), s)
        assert abs(via_trace - via_corr) <= 1e-12

    def test_unnormalized_setting(self, bell_state):
        s = MeasurementSettings(2.0 * Z, X, Z, X)
        with pytest.raises(UnnormalizedSetting):
            chsh_value(bell_state, s)

    @given(seed=st.integers(min_value=0, max_value=2000))
    @settings(max_examples=40, deadline=None, derandomize=True)
    def test_dominated_by_horodecki(self, seed):
        rng = np.random.default_rng(seed)
        state = random_state(seed)
        s = random_settings(rng)
        assert chsh_value(state, s) <= horodecki_bfv(state).value + 1e-9


class TestHorodecki:
    def test_bell_state(self, bell_state):
        res = horodecki_bfv(bell_state)
        assert res.value == pytest.approx(2.0 * SQRT2, abs=1e-12)
        assert res.upsilon1 == pytest.approx(1.0, abs=1e-12)
        assert res.upsilon2 == pytest.approx(1.0, abs=1e-12)

    def test_ket00(self, ket00_state):
        res = horodecki_bfv(ket00_state)
        assert res.value == pytest.approx(2.0, abs=1e-12)
        assert res.upsilon2 == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(25))
    def test_result_invariants(self, seed):
        res = horodecki_bfv(random_state(seed))
        assert res.value == pytest.approx(
            2.0 * math.sqrt(res.upsilon1 + res.upsilon2), abs=1e-12
        )
        assert 0.0 <= res.upsilon2 <= res.upsilon1 <= 1.0 + 1e-9
        assert res.value <= TSIRELSON_BOUND + 1e-9

    def test_diagonal_state_bound(self):
        # For diagonal rho, L = diag(0, 0, L_zz), so the value is 2 |L_zz| <= 2.
        for p in ([0.4, 0.3, 0.2, 0.1], [0.7, 0.1, 0.1, 0.1], [0.25] * 4):
            state = diagonal_state(p)
            low = correlation_matrix(state).entries
            res = horodecki_bfv(state)
            assert res.value == pytest.approx(2.0 * abs(low[2, 2]), abs=1e-12)
            assert res.value <= 2.0 + 1e-9

    @pytest.mark.parametrize("seed", range(8))
    def test_local_unitary_invariance(self, seed):
        # Conjugating by a product of single-qubit unitaries rotates the Bloch
        # frames, a similarity of L^T L; the value must not move.
        rng = np.random.default_rng(seed)
        state = random_state(seed)

        def haar_su2():
            g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            q, r = np.linalg.qr(g)
            return q * (np.diag(r) / np.abs(np.diag(r)))

        u = np.kron(haar_su2(), haar_su2())
        rotated = TwoQubitState(u @ state.entries @ u.conj().T)
        assert horodecki_bfv(rotated).value == pytest.approx(
            horodecki_bfv(state).value, abs=1e-9
        )


class TestSym3Eigvals:
    @pytest.mark.parametrize("seed", range(50))
    def test_matches_lapack(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((3, 3))
        m = a.T @ a
        assert np.max(np.abs(_sym3_eigvals(m) - np.linalg.eigvalsh(m)[::-1])) <= 1e-12

    def test_degenerate_spectrum(self):
        m = np.diag([0.0, 0.0, 0.9])
        assert np.allclose(_sym3_eigvals(m), [0.9, 0.0, 0.0], atol=1e-15)


class TestMaximize:
    def test_bell_state(self, bell_state):
        res = maximize_chsh(bell_state)
        assert res.value == pytest.approx(2.0 * SQRT2, abs=1e-6)
        assert res.settings is not None

    def test_maximally_mixed(self):
        res = maximize_chsh(diagonal_state([0.25] * 4))
        assert abs(res.value) <= 1e-9

    def test_budget_too_small(self, bell_state):
        with pytest.raises(BudgetTooSmall):
            maximize_chsh(bell_state, OptimizerBudget(restarts=0))

    def test_deterministic_in_seed(self, bell_state):
        a = maximize_chsh(bell_state, OptimizerBudget(seed=3))
        b = maximize_chsh(bell_state, OptimizerBudget(seed=3))
        assert a.value == b.value
        assert np.array_equal(a.settings.a1, b.settings.a1)

    @pytest.mark.parametrize("seed", range(20))
    def test_agrees_with_horodecki(self, seed):
        state = random_state(seed)
        closed = horodecki_bfv(state).value
        found = maximize_chsh(state).value
        assert found <= closed + 1e-9
        assert abs(found - closed) <= 1e-3


class TestOptimalSettings:
    @pytest.mark.parametrize("seed", [0, 3, 7])
    def test_achieves_bound(self, seed):
        state = random_state(seed)
        settings_found = optimal_settings(state)
        achieved = chsh_value(state, settings_found)
        assert achieved >= horodecki_bfv(state).value - 1e-6

    def test_bell_state(self, bell_state):
        achieved = chsh_value(bell_state, optimal_settings(bell_state))
        assert achieved >= 2.0 * SQRT2 - 1e-6

    def test_ket00(self, ket00_state):
        achieved = chsh_value(ket00_state, optimal_settings(ket00_state))
        assert achieved >= 2.0 - 1e-6

    def test_consistent_with_result_value(self):
        state = random_state(11)
        res = maximize_chsh(state)
        assert chsh_value(state, res.settings) == pytest.approx(res.value, abs=1e-6)
