import numpy as np
import pytest

from belltopo.qubit_state import TwoQubitState


@pytest.fixture
def bell_state():
    """|Phi+> = (|00> + |11>) / sqrt(2) as a density matrix."""
    rho = np.zeros((4, 4), dtype=complex)
    for i in (0, 3):
        for j in (0, 3):
            rho[i, j] = 0.5
    return TwoQubitState(rho)


@pytest.fixture
def ket00_state():
    return TwoQubitState(np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex))


def diagonal_state(p):
    return TwoQubitState(np.diag(np.asarray(p, dtype=float)).astype(complex))


def unit_vector(rng):
    while True:
        v = rng.standard_normal(3)
        n = np.linalg.norm(v)
        if n > 1e-6:
            return v / n
