"""Adaptive one-dimensional quadrature and the complete elliptic integral K.

Every correlator of the model reduces to an integral over [0, pi].  Close to
the critical coupling the integrands develop a sharp peak at phi -> 0, so a
fixed-order rule is not safe; the workhorse here is adaptive bisection with
the embedded Gauss7/Kronrod15 pair.  All fifteen nodes are interior, which
keeps the endpoints phi = 0 and phi = pi out of the sample set.

The complete elliptic integral of the first kind is computed independently by
the arithmetic-geometric mean iteration (quadratic convergence), and the test
suite cross-checks it against the direct quadrature of its defining integral.
"""

import heapq
import math
from dataclasses import dataclass

import numpy as np

MAX_DEPTH = 60
MIN_REL_TOL = 1e-13
ABS_FLOOR = 1e-14
# Hard cap on panel evaluations; hitting it means the tolerance is
# unreachable (e.g. a non-integrable singularity) and we fail loudly.
MAX_PANELS = 100_000

# G7/K15 nodes and weights on [-1, 1] (Kronrod nodes extend the Gauss-7 set;
# Gauss weights are zero at the Kronrod-only nodes).
_NODES = np.array([
    -0.991455371120813,
    -0.949107912342759,
    -0.864864423359769,
    -0.741531185599394,
    -0.586087235467691,
    -0.405845151377397,
    -0.207784955007898,
    0.0,
    0.207784955007898,
    0.405845151377397,
    0.586087235467691,
    0.741531185599394,
    0.864864423359769,
    0.949107912342759,
    0.991455371120813,
])
_WEIGHTS_K15 = np.array([
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
    0.204432940075298,
    0.190350578064785,
    0.169004726639267,
    0.140653259715525,
    0.104790010322250,
    0.063092092629979,
    0.022935322010529,
])
_WEIGHTS_G7 = np.array([
    0.0,
    0.129484966168870,
    0.0,
    0.279705391489277,
    0.0,
    0.381830050505119,
    0.0,
    0.417959183673469,
    0.0,
    0.381830050505119,
    0.0,
    0.279705391489277,
    0.0,
    0.129484966168870,
    0.0,
])


class MaxDepthExceeded(RuntimeError):
    """Adaptive bisection hit the depth limit before converging.

    Carries the best available estimate so callers can decide whether the
    partial answer is still usable.
    """

    def __init__(self, estimate, error_estimate, subdivisions):
        self.estimate = estimate
        self.error_estimate = error_estimate
        self.subdivisions = subdivisions
        super().__init__(
            f"adaptive quadrature did not converge within depth {MAX_DEPTH}: "
            f"estimate {estimate!r}, error estimate {error_estimate!r}"
        )


class NonFiniteSample(ValueError):
    """The integrand returned NaN or infinity at a quadrature node."""


class ModulusOutOfRange(ValueError):
    """Elliptic modulus outside [0, 1); the integral diverges at 1."""


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    subdivisions: int


def _panel(f, lo, hi):
    """Evaluate the G7/K15 pair on one panel; returns (k15, |k15 - g7|)."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid + half * _NODES
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        raise TypeError("integrand must be vectorized: f(ndarray) -> ndarray")
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise NonFiniteSample(f"integrand returned a non-finite value near x = {bad!r}")
    k15 = half * float(_WEIGHTS_K15 @ fx)
    g7 = half * float(_WEIGHTS_G7 @ fx)
    return k15, abs(k15 - g7)


def integrate(f, lo, hi, rel_tol=1e-10):
    """Integrate a vectorized callable over [lo, hi], globally adaptive.

    The panel with the largest embedded-pair error estimate is bisected until
    the summed estimate drops below max(rel_tol * |I|, 1e-14).  Splitting the
    worst panel first (rather than imposing per-branch tolerances) keeps the
    panel count roughly linear in the refinement depth even when the
    integrand hides a sharp boundary layer.  The heap order is a total order
    on (error, position), and the final value is re-summed left to right, so
    the result is deterministic.
    """
    if not (lo < hi):
        raise ValueError(f"need lo < hi, got [{lo!r}, {hi!r}]")
    if rel_tol < MIN_REL_TOL:
        raise ValueError(f"rel_tol must be >= {MIN_REL_TOL}, got {rel_tol!r}")

    value, err = _panel(f, lo, hi)
    # Max-heap on the error estimate; entries (-err, lo, hi, value, depth).
    heap = [(-err, lo, hi, value, 0)]
    total = value
    total_err = err
    subdivisions = 1
    exhausted = []

    while True:
        tol = max(rel_tol * abs(total), ABS_FLOOR)
        if total_err <= tol:
            break
        if not heap or subdivisions > MAX_PANELS:
            raise MaxDepthExceeded(total, total_err, subdivisions)
        neg_err, a, b, old_value, depth = heapq.heappop(heap)
        if depth >= MAX_DEPTH:
            if -neg_err > tol:
                # The worst panel alone exceeds the budget and cannot be
                # split further; no amount of work elsewhere can succeed.
                raise MaxDepthExceeded(total, total_err, subdivisions)
            exhausted.append((-neg_err, a, b, old_value, depth))
            continue
        m = 0.5 * (a + b)
        left_value, left_err = _panel(f, a, m)
        right_value, right_err = _panel(f, m, b)
        subdivisions += 2
        total += left_value + right_value - old_value
        total_err += left_err + right_err - (-neg_err)
        heapq.heappush(heap, (-left_err, a, m, left_value, depth + 1))
        heapq.heappush(heap, (-right_err, m, b, right_value, depth + 1))

    # Fixed left-to-right summation order for the reported value.
    panels = [(a, v) for _, a, _, v, _ in heap]
    panels.extend((a, v) for _, a, _, v, _ in exhausted)
    panels.sort()
    value = math.fsum(v for _, v in panels)
    return QuadratureResult(value=value, error_estimate=total_err, subdivisions=subdivisions)


def elliptic_X(chi):
    """Complete elliptic integral of the first kind with modulus chi.

    Defined as the integral over [0, pi/2] of (1 - chi^2 sin^2 phi)^(-1/2);
    evaluated by the AGM iteration K = pi / (2 * agm(1, sqrt(1 - chi^2))),
    accurate to about 1e-14 relative.  Diverges logarithmically as chi -> 1.
    """
    if not (0.0 <= chi < 1.0):
        raise ModulusOutOfRange(f"modulus must satisfy 0 <= chi < 1, got {chi!r}")
    a = 1.0
    # (1 - chi)(1 + chi) keeps precision when chi is close to 1.
    b = math.sqrt((1.0 - chi) * (1.0 + chi))
    for _ in range(64):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)
