"""Bell function values of two-qubit states and their use as a marker of the
topological transition in the deformed toric code."""

from .chsh import (
    BfvResult,
    MeasurementSettings,
    OptimizerBudget,
    chsh_value,
    horodecki_bfv,
    maximize_chsh,
    optimal_settings,
)
from .kcc_model import (
    DualParams,
    KccPoint,
    PairKind,
    bfv,
    corr_nearest,
    corr_next_nearest,
    critical_beta,
    dbfv_dbeta_analytic,
    dual_params,
    kcc_point,
    magnetization,
    pure_state_bfv,
    reduced_density,
    t_kappa,
)
from .oracles import (
    IsingTorus,
    KccTorus,
    compare_formulas,
    ising_expectation,
    kcc_ground_state,
    reduce_pair,
)
from .quadrature import QuadratureResult, elliptic_X, integrate
from .qubit_state import (
    CorrelationMatrix,
    TwoQubitState,
    correlation_matrix,
    random_state,
    validate_state,
)
from .sweep import (
    CriticalEstimate,
    DerivativeMethod,
    SweepConfig,
    SweepSeries,
    bfv_curve,
    convergence_study,
    estimate_critical,
)

__version__ = "0.1.0"
