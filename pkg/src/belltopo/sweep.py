"""Coupling-grid evaluation of the Bell function value and its derivative.

The transition announces itself in d(BFV)/d(beta): central finite differences
with shrinking step delta_beta develop an ever higher peak at beta_c, and the
closed integral form diverges there outright.  This module produces those
curves on a grid, locates the peak, and refines it with a parabolic fit
through the discrete maximum and its two neighbors.

Grid points where the analytic integral is inside its singular window are
recorded as +inf with a 'divergent' flag (the singularity is the signal);
points where the quadrature gives up are NaN with a 'nonconverged' flag and
are excluded from peak finding.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from . import kcc_model
from .kcc_model import PairKind
from .quadrature import MaxDepthExceeded

FLAG_DIVERGENT = "divergent"
FLAG_NONCONVERGED = "nonconverged"


class DerivativeMethod(Enum):
    FINITE_DIFFERENCE = "fd"
    ANALYTIC = "analytic"


class NoInteriorPeak(RuntimeError):
    """The derivative maximum sits on the grid boundary."""


@dataclass(frozen=True)
class SweepConfig:
    """Grid and differentiation choices for one sweep.

    delta_beta is the finite-difference step of the derivative and is
    independent of the grid spacing; the default window brackets the
    transition point.
    """

    beta_min: float = 0.40
    beta_max: float = 0.50
    steps: int = 100
    delta_beta: float = 1e-3
    kind: PairKind = PairKind.NEAREST
    method: DerivativeMethod = DerivativeMethod.FINITE_DIFFERENCE

    def __post_init__(self):
        if not (0.0 < self.beta_min < self.beta_max):
            raise ValueError(f"need 0 < beta_min < beta_max, got {self.beta_min}, {self.beta_max}")
        if self.steps < 8:
            raise ValueError(f"steps must be >= 8, got {self.steps}")
        if not self.delta_beta > 0.0:
            raise ValueError(f"delta_beta must be positive, got {self.delta_beta!r}")

    def betas(self):
        span = self.beta_max - self.beta_min
        return [self.beta_min + span * k / self.steps for k in range(self.steps + 1)]


@dataclass(frozen=True)
class SweepSeries:
    betas: tuple
    bfv: tuple
    dbfv: tuple
    flags: tuple
    config: SweepConfig


@dataclass(frozen=True)
class CriticalEstimate:
    beta_hat: float
    peak_value: float
    delta_beta: float
    method: DerivativeMethod


def central_difference(f, x, delta):
    """Symmetric difference quotient (f(x + delta) - f(x - delta)) / (2 delta)."""
    return (f(x + delta) - f(x - delta)) / (2.0 * delta)


def bfv_curve(config, _cache=None):
    """Bell function values and their derivative on the configured grid."""
    cache = _cache if _cache is not None else {}

    def value(beta):
        key = (beta, config.kind)
        if key not in cache:
            cache[key] = kcc_model.bfv(beta, config.kind)
        return cache[key]

    betas = config.betas()
    values = [value(b) for b in betas]
    dbfv = []
    flags = []
    for b in betas:
        if config.method is DerivativeMethod.FINITE_DIFFERENCE:
            dbfv.append(central_difference(value, b, config.delta_beta))
            flags.append(None)
        else:
            try:
                dbfv.append(abs(kcc_model.dbfv_dbeta_analytic(b)))
                flags.append(None)
            except kcc_model.DivergentAtCritical:
                dbfv.append(math.inf)
                flags.append(FLAG_DIVERGENT)
            except MaxDepthExceeded:
                dbfv.append(math.nan)
                flags.append(FLAG_NONCONVERGED)
    return SweepSeries(
        betas=tuple(betas),
        bfv=tuple(values),
        dbfv=tuple(dbfv),
        flags=tuple(flags),
        config=config,
    )


def _parabolic_peak(betas, dbfv, k):
    """Vertex of the parabola through points k-1, k, k+1 of the series."""
    y0, y1, y2 = dbfv[k - 1], dbfv[k], dbfv[k + 1]
    h = betas[k] - betas[k - 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return betas[k], y1
    offset = 0.5 * (y0 - y2) / denom
    return betas[k] + offset * h, y1 - 0.25 * (y0 - y2) * offset


def estimate_critical(config, series=None):
    """Location of the derivative peak, refined by a parabolic fit.

    A 'divergent'-flagged grid point marks the singularity itself and wins
    outright (no refinement through an infinity); 'nonconverged' points are
    skipped.  Ties break toward smaller beta.  Raises NoInteriorPeak when the
    maximum lands on the first or last grid point.
    """
    if config.steps < 32:
        raise ValueError(f"estimate_critical needs steps >= 32, got {config.steps}")
    if series is None:
        series = bfv_curve(config)

    for beta, flag in zip(series.betas, series.flags):
        if flag == FLAG_DIVERGENT:
            return CriticalEstimate(
                beta_hat=beta,
                peak_value=math.inf,
                delta_beta=config.delta_beta,
                method=config.method,
            )

    best: Optional[int] = None
    for k, (value, flag) in enumerate(zip(series.dbfv, series.flags)):
        if flag == FLAG_NONCONVERGED:
            continue
        if best is None or value > series.dbfv[best]:
            best = k
    if best is None or best == 0 or best == len(series.betas) - 1:
        raise NoInteriorPeak(f"derivative maximum is not interior to the grid (index {best})")

    beta_hat, peak = _parabolic_peak(series.betas, series.dbfv, best)
    return CriticalEstimate(
        beta_hat=beta_hat,
        peak_value=peak,
        delta_beta=config.delta_beta,
        method=config.method,
    )


def convergence_study(base, deltas):
    """One critical-point estimate per finite-difference step.

    The steps must be positive and strictly decreasing; the resulting peak
    heights grow as the step shrinks, the signature of the divergence.  The
    grid values of the BFV are shared between the rows.
    """
    deltas = list(deltas)
    if not deltas:
        raise ValueError("deltas must be non-empty")
    if any(d <= 0.0 for d in deltas):
        raise ValueError(f"deltas must be positive, got {deltas}")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError(f"deltas must be strictly decreasing, got {deltas}")

    cache = {}
    table = []
    for delta in deltas:
        config = replace(
            base, delta_beta=delta, method=DerivativeMethod.FINITE_DIFFERENCE
        )
        series = bfv_curve(config, _cache=cache)
        table.append(estimate_critical(config, series=series))
    return table
