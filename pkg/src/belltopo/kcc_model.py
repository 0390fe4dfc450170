"""Thermodynamic-limit quantities of the deformed toric code.

The ground state of the model maps onto the classical 2D Ising model at
coupling beta, so every observable needed here is an Ising correlator:

* single-edge polarization <sigma^z_i>  ->  nearest-neighbor Ising bond
  correlator, in closed form through the complete elliptic integral,
* nearest edge pairs  ->  a one-dimensional integral over [0, pi],
* next-to-nearest edge pairs  ->  a quadratic combination of the five
  integrals T_kappa, kappa in {-2..2}, built from the dual coupling.

The printed bond-correlator formulas tend to -1 as beta -> infinity while the
ground state becomes fully polarized with <sigma^z> = +1, i.e. they carry the
opposite overall sign from the ferromagnetic convention (the small-lattice
enumeration in the oracles module confirms this).  The reduced two-qubit
matrix therefore uses the magnitudes; the raw signed values stay available
through KccPoint for oracle comparisons.

The Bell function value of the (diagonal) reduced matrix is 2|c|, and its
beta-derivative has a closed integral form that is singular exactly at
beta_c = ln(1 + sqrt(2)) / 2, the topological transition point.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .chsh import horodecki_bfv
from .quadrature import elliptic_X, integrate
from .qubit_state import TwoQubitState, ensure_valid

# Radius around beta_c inside which the closed limit replaces the elliptic
# branch of the magnetization (the 0 * infinity product there) and the
# derivative integral is reported as divergent instead of evaluated.
MAGNETIZATION_WINDOW = 1e-8
DERIVATIVE_WINDOW = 1e-7

CORRELATOR_REL_TOL = 1e-10
DERIVATIVE_REL_TOL = 1e-9


class NonPositiveBeta(ValueError):
    pass


class DivergentAtCritical(RuntimeError):
    """The analytic derivative was requested inside the singular window."""


class PairKind(Enum):
    NEAREST = "nearest"
    NEXT_TO_NEAREST = "next"


@dataclass(frozen=True)
class DualParams:
    """Coupling beta with its dual beta* and the derived modulus trio.

    chi = 2 sinh(2b) / cosh^2(2b)      elliptic modulus, = 1 only at beta_c
    tanh(beta*) = exp(-2b)             Kramers-Wannier dual coupling
    gamma = 1 / cosh(2 beta*)
    xi = sqrt(1 - gamma^2) / tanh(2b)
    """

    beta: float
    chi: float
    beta_star: float
    gamma: float
    xi: float


@dataclass(frozen=True)
class KccPoint:
    """Raw signed correlators at one coupling, as the formulas print them."""

    beta: float
    m: float
    c_nn: float
    c_nnn: float


def critical_beta():
    """Exact transition point ln(1 + sqrt(2)) / 2, i.e. arcsinh(1) / 2."""
    return 0.5 * math.asinh(1.0)


def _require_positive(beta):
    if not (beta > 0.0):
        raise NonPositiveBeta(f"beta must be positive, got {beta!r}")


def dual_params(beta):
    _require_positive(beta)
    # chi written as 2 tanh / cosh stays finite for arbitrarily large beta.
    chi = min(2.0 * math.tanh(2.0 * beta) / math.cosh(2.0 * beta), 1.0)
    x = math.exp(-2.0 * beta)
    # atanh in log form; x < 1 is guaranteed by beta > 0.
    beta_star = 0.5 * math.log((1.0 + x) / (1.0 - x))
    gamma = 1.0 / math.cosh(2.0 * beta_star)
    xi = math.sqrt(max(1.0 - gamma * gamma, 0.0)) / math.tanh(2.0 * beta)
    return DualParams(beta=beta, chi=chi, beta_star=beta_star, gamma=gamma, xi=xi)


def magnetization(beta):
    """Single-edge polarization -coth(2b) [pi + (4 tanh^2(2b) - 2) K(chi)] / (2 pi).

    At beta_c the elliptic integral diverges but its coefficient vanishes
    linearly, leaving the closed value -coth(2 beta_c)/2 = -sqrt(2)/2; a small
    window around beta_c returns that limit directly.
    """
    _require_positive(beta)
    coth = 1.0 / math.tanh(2.0 * beta)
    if abs(beta - critical_beta()) <= MAGNETIZATION_WINDOW:
        return -0.5 * math.sqrt(2.0)
    params = dual_params(beta)
    t2 = math.tanh(2.0 * beta) ** 2
    return -coth * (math.pi + (4.0 * t2 - 2.0) * elliptic_X(params.chi)) / (2.0 * math.pi)


def corr_nearest(beta):
    """Nearest-pair correlator as the integral over [0, pi] of

        {[csch^2(2b) - cos p] cos p - sin^2 p}
        / {sin^2 p + [csch^2(2b) - cos p]^2}^(1/2)  dp / pi.

    At beta_c the integrand collapses to -sin(p/2) and the value is -2/pi.
    """
    _require_positive(beta)
    s = 1.0 / math.sinh(2.0 * beta) ** 2

    def integrand(p):
        cos = np.cos(p)
        sin2 = np.sin(p) ** 2
        gap = s - cos
        return (gap * cos - sin2) / np.sqrt(sin2 + gap * gap)

    return integrate(integrand, 0.0, math.pi, rel_tol=CORRELATOR_REL_TOL).value / math.pi


def t_kappa(beta, kappa):
    """T_kappa integral for the next-to-nearest correlator,

        (1/pi) * integral over [0, pi] of
        [(xi - cos p) cos(kappa p) + gamma sin p sin(kappa p)]
        / [(gamma sin p)^2 + (xi - cos p)^2]^(1/2)  dp.
    """
    _require_positive(beta)
    if kappa not in (-2, -1, 0, 1, 2):
        raise ValueError(f"kappa must be in -2..2, got {kappa!r}")
    return _t_kappa(dual_params(beta), kappa)


def _t_kappa(params, kappa):
    gamma = params.gamma
    xi = params.xi

    def integrand(p):
        gap = xi - np.cos(p)
        sin = np.sin(p)
        return (gap * np.cos(kappa * p) + gamma * sin * np.sin(kappa * p)) / np.sqrt(
            (gamma * sin) ** 2 + gap * gap
        )

    return integrate(integrand, 0.0, math.pi, rel_tol=CORRELATOR_REL_TOL).value / math.pi


def corr_next_nearest(beta):
    """Next-to-nearest correlator

        cosh^2(b*) (T_-1^2 - T_-2 T_0) - sinh^2(b*) (T_1^2 - T_2 T_0),

    with the five T_kappa sharing one set of dual parameters per call.
    """
    _require_positive(beta)
    params = dual_params(beta)
    t = {kappa: _t_kappa(params, kappa) for kappa in (-2, -1, 0, 1, 2)}
    ch2 = math.cosh(params.beta_star) ** 2
    sh2 = math.sinh(params.beta_star) ** 2
    return ch2 * (t[-1] ** 2 - t[-2] * t[0]) - sh2 * (t[1] ** 2 - t[2] * t[0])


def kcc_point(beta):
    """All three raw signed correlators at one coupling."""
    return KccPoint(
        beta=beta,
        m=magnetization(beta),
        c_nn=corr_nearest(beta),
        c_nnn=corr_next_nearest(beta),
    )


def reduced_density(beta, kind):
    """Reduced two-qubit matrix (I + m(sz_i + sz_j) + c sz_i sz_j) / 4.

    Diagonal with entries (1 + 2m + c, 1 - c, 1 - c, 1 - 2m + c) / 4, built
    from the correlator magnitudes (see the module docstring on signs).  The
    validation step raising NotPositive would indicate a transcription bug in
    the correlator formulas, not a numerical accident.
    """
    _require_positive(beta)
    m = abs(magnetization(beta))
    if kind is PairKind.NEAREST:
        c = abs(corr_nearest(beta))
    elif kind is PairKind.NEXT_TO_NEAREST:
        c = abs(corr_next_nearest(beta))
    else:
        raise TypeError(f"kind must be a PairKind, got {kind!r}")
    diag = np.array([1.0 + 2.0 * m + c, 1.0 - c, 1.0 - c, 1.0 - 2.0 * m + c]) / 4.0
    state = TwoQubitState(np.diag(diag).astype(complex))
    ensure_valid(state)
    return state


def bfv(beta, kind):
    """Bell function value of the reduced pair state; never exceeds 2.

    The reduced matrix is diagonal, so its correlations are classical and the
    value equals 2|c| for the pair correlator c.
    """
    return horodecki_bfv(reduced_density(beta, kind)).value


def dbfv_dbeta_analytic(beta):
    """Closed integral form of d(BFV)/d(beta) for the nearest pair,

        (1/pi) * integral over [0, pi] of csch^2(2b) sin^2 p *
        8 coth(2b) csch^2(2b) / (1 - 2 cos p csch^2(2b) + csch^4(2b))^(3/2) dp.

    This is what differentiating the nearest-pair integral under the integral
    sign yields for 2|c|; the denominator vanishes at p -> 0 exactly when
    csch^2(2b) = 1, i.e. at beta_c, the integral's only singular point.
    Inside a window of 1e-7 around beta_c the call reports divergence rather
    than fabricating a large number.
    """
    _require_positive(beta)
    if abs(beta - critical_beta()) <= DERIVATIVE_WINDOW:
        raise DivergentAtCritical(
            f"derivative integral is singular at beta_c, beta = {beta!r} is inside the window"
        )
    sh = math.sinh(2.0 * beta)
    s = 1.0 / sh ** 2
    coth = 1.0 / math.tanh(2.0 * beta)
    amp = 8.0 * coth * s * s
    # The base 1 - 2 s cos p + s^2 collapses to ~(1-s)^2 at p -> 0 and loses
    # all digits to cancellation just where the integrand peaks; the identity
    # (1-s)^2 + 4 s sin^2(p/2), with 1-s factored through sinh^2 - 1, keeps
    # it fully accurate arbitrarily close to the critical coupling.
    one_minus_s = (sh - 1.0) * (sh + 1.0) / sh ** 2

    def integrand(p):
        sin2 = np.sin(p) ** 2
        base = one_minus_s ** 2 + 4.0 * s * np.sin(0.5 * p) ** 2
        return amp * sin2 / base ** 1.5

    return integrate(integrand, 0.0, math.pi, rel_tol=DERIVATIVE_REL_TOL).value / math.pi


def pure_state_bfv(beta):
    """Bell function value 2 sqrt(2 - c0^2) of one edge against the rest.

    Splitting the ground state on a single edge qubit gives a pure two-qubit
    entangled state with Schmidt weights (1 +/- c0)/2, where c0 is the bond
    correlator; the value is 2 sqrt(1 + (1 - c0^2)), which exceeds 2 whenever
    |c0| < 1 and reaches 2 sqrt(2) in the toric-code limit beta = 0.
    """
    if beta < 0.0:
        raise NonPositiveBeta(f"beta must be >= 0, got {beta!r}")
    c0 = 0.0 if beta == 0.0 else magnetization(beta)
    return 2.0 * math.sqrt(2.0 - c0 * c0)
