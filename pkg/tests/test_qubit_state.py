import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from belltopo.qubit_state import (
    NonHermitian,
    NotPositive,
    TraceNotOne,
    TwoQubitState,
    correlation_matrix,
    ensure_valid,
    random_state,
    validate_state,
)
from conftest import diagonal_state


class TestValidateState:
    def test_maximally_mixed_passes(self):
        report = validate_state(diagonal_state([0.25] * 4))
        assert report.passed

    def test_pure_ket00_passes(self, ket00_state):
        assert validate_state(ket00_state).passed

    def test_negative_eigenvalue(self):
        report = validate_state(diagonal_state([0.6, 0.6, -0.1, -0.1]))
        assert not report.passed
        names = [name for name, _ in report.violations]
        assert names == ["NotPositive"]
        assert report.violations[0][1] == pytest.approx(-0.1, abs=1e-12)
        with pytest.raises(NotPositive):
            ensure_valid(diagonal_state([0.6, 0.6, -0.1, -0.1]))

    def test_non_hermitian(self):
        rho = np.diag([0.25] * 4).astype(complex)
        rho[0, 1] = 0.1
        report = validate_state(TwoQubitState(rho))
        assert ("NonHermitian", pytest.approx(0.1)) in report.violations
        with pytest.raises(NonHermitian):
            ensure_valid(TwoQubitState(rho))

    def test_trace_not_one(self):
        with pytest.raises(TraceNotOne):
            ensure_valid(diagonal_state([0.3, 0.3, 0.2, 0.1]))

    def test_non_finite_rejected(self):
        rho = np.diag([0.25] * 4).astype(complex)
        rho[2, 2] = np.nan
        with pytest.raises(ValueError):
            TwoQubitState(rho)

    def test_entries_read_only(self, bell_state):
        with pytest.raises(ValueError):
            bell_state.entries[0, 0] = 9.0


class TestCorrelationMatrix:
    def test_bell_state(self, bell_state):
        low = correlation_matrix(bell_state).entries
        assert np.allclose(low, np.diag([1.0, -1.0, 1.0]), atol=1e-14)

    def test_product_ket00(self, ket00_state):
        low = correlation_matrix(ket00_state).entries
        assert np.allclose(low, np.diag([0.0, 0.0, 1.0]), atol=1e-14)

    def test_diagonal_state_structure(self):
        # sigma_x/sigma_y pairs have no diagonal support, so the x and y
        # entries vanish identically for a diagonal state.
        low = correlation_matrix(diagonal_state([0.4, 0.3, 0.2, 0.1])).entries
        off_diag = low - np.diag(np.diag(low))
        assert np.all(off_diag == 0.0)
        assert low[0, 0] == 0.0 and low[1, 1] == 0.0

    @given(seed=st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=40, deadline=None, derandomize=True)
    def test_entries_bounded(self, seed):
        low = correlation_matrix(random_state(seed)).entries
        assert np.all(np.abs(low) <= 1.0 + 1e-9)
        # Each singular value is at most 1, so the trace of L^T L is at most 3.
        assert np.sum(np.linalg.eigvalsh(low.T @ low)) <= 3.0 + 1e-6

    @given(
        seed1=st.integers(min_value=0, max_value=500),
        seed2=st.integers(min_value=501, max_value=1000),
        p=st.floats(min_value=0.0, max_value=1.0),
    )
    @settings(max_examples=30, deadline=None, derandomize=True)
    def test_linearity(self, seed1, seed2, p):
        rho1 = random_state(seed1)
        rho2 = random_state(seed2)
        mixed = TwoQubitState(p * rho1.entries + (1.0 - p) * rho2.entries)
        lhs = correlation_matrix(mixed).entries
        rhs = p * correlation_matrix(rho1).entries + (1.0 - p) * correlation_matrix(rho2).entries
        assert np.max(np.abs(lhs - rhs)) <= 1e-12


class TestRandomState:
    def test_deterministic(self):
        assert np.array_equal(random_state(1).entries, random_state(1).entries)

    def test_seed_sensitivity(self):
        assert not np.array_equal(random_state(1).entries, random_state(2).entries)

    @pytest.mark.parametrize("seed", range(8))
    def test_valid_by_construction(self, seed):
        report = validate_state(random_state(seed))
        assert report.passed
        assert report.trace_residual <= 1e-12
        assert report.min_eigenvalue >= 0.0
