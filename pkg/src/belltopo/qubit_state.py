"""Two-qubit density matrices and their Pauli correlation matrices.

States are 4x4 complex matrices in the computational basis ordered
|00>, |01>, |10>, |11> (row-major).  The correlation matrix L collects the
nine expectation values Tr[rho sigma_s (x) sigma_t] over the Pauli axes
(x, y, z); it is the only ingredient the Horodecki criterion needs.
"""

from dataclasses import dataclass, field

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
# Reduced matrices assembled from quadrature output carry ~1e-12 noise, so
# eigenvalues are allowed to undershoot zero by this much.
PSD_TOL = -1e-10

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# sigma_s (x) sigma_t for all nine axis pairs, built once.
_PAULI_PAIRS = [[np.kron(ps, pt) for pt in PAULIS] for ps in PAULIS]


class StateValidationError(ValueError):
    """Base class for density-matrix invariant violations."""


class NonHermitian(StateValidationError):
    pass


class TraceNotOne(StateValidationError):
    pass


class NotPositive(StateValidationError):
    pass


@dataclass(frozen=True)
class TwoQubitState:
    """Immutable 4x4 density matrix in the |00>,|01>,|10>,|11> basis."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m.view(float))):
            raise ValueError("state entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)


@dataclass(frozen=True)
class CorrelationMatrix:
    """3x3 real matrix of Pauli-pair expectations, axes ordered (x, y, z)."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)


@dataclass(frozen=True)
class ValidationReport:
    """Measured residuals for the three density-matrix invariants.

    `violations` lists (invariant name, residual) for each failed check.
    """

    hermiticity_residual: float
    trace_residual: float
    min_eigenvalue: float
    violations: tuple = field(default_factory=tuple)

    @property
    def passed(self):
        return not self.violations


def validate_state(state):
    """Check Hermiticity, unit trace and positive semidefiniteness.

    Returns a ValidationReport; never raises for a failing state (use
    ensure_valid for the raising variant).
    """
    rho = state.entries
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = float(abs(np.trace(rho) - 1.0))
    # Eigenvalues of the Hermitian part; identical to those of rho once the
    # Hermiticity check passes.
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])

    violations = []
    if herm > HERMITICITY_TOL:
        violations.append(("NonHermitian", herm))
    if trace > TRACE_TOL:
        violations.append(("TraceNotOne", trace))
    if min_eig < PSD_TOL:
        violations.append(("NotPositive", min_eig))
    return ValidationReport(
        hermiticity_residual=herm,
        trace_residual=trace,
        min_eigenvalue=min_eig,
        violations=tuple(violations),
    )


_ERRORS = {"NonHermitian": NonHermitian, "TraceNotOne": TraceNotOne, "NotPositive": NotPositive}


def ensure_valid(state):
    """Raise the specific invariant error for the first failed check."""
    report = validate_state(state)
    if not report.passed:
        name, residual = report.violations[0]
        raise _ERRORS[name](f"{name}: residual {residual:.6e}")
    return report


def correlation_matrix(state):
    """Pauli correlation matrix L with L[s,t] = Tr[rho sigma_s (x) sigma_t]."""
    ensure_valid(state)
    rho = state.entries
    entries = np.empty((3, 3))
    for s in range(3):
        for t in range(3):
            # The trace is real for a valid state; the imaginary part is
            # rounding noise at the 1e-12 level or below.
            entries[s, t] = np.trace(rho @ _PAULI_PAIRS[s][t]).real
    return CorrelationMatrix(entries)


def random_state(seed):
    """Random full-rank density matrix, deterministic in the seed.

    Draws a 4x4 matrix G of independent standard complex Gaussians and
    returns G G^dagger normalized to unit trace, which is positive
    semidefinite by construction.
    """
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return TwoQubitState(rho)
