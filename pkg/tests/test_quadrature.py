import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from belltopo.quadrature import (
    MaxDepthExceeded,
    ModulusOutOfRange,
    NonFiniteSample,
    elliptic_X,
    integrate,
)


class TestIntegrate:
    def test_sine(self):
        r = integrate(np.sin, 0.0, math.pi)
        assert abs(r.value - 2.0) <= 1e-12
        assert r.error_estimate >= 0.0

    def test_cosine(self):
        r = integrate(np.cos, 0.0, math.pi)
        assert abs(r.value) <= 1e-12

    def test_half_angle_sine(self):
        # Antiderivative 2 cos(p/2); this is the critical-coupling integrand
        # of the nearest-pair correlator.
        r = integrate(lambda p: -np.sin(0.5 * p), 0.0, math.pi)
        assert abs(r.value + 2.0) <= 1e-12

    def test_error_estimate_on_success(self):
        r = integrate(np.sin, 0.0, math.pi, rel_tol=1e-10)
        assert r.error_estimate <= max(1e-10 * abs(r.value), 1e-14)

    def test_sharp_peak(self):
        # Integrable spike much narrower than the interval.
        a = 1e-7
        r = integrate(lambda x: a / (a * a + x * x), -1.0, 1.0, rel_tol=1e-10)
        exact = 2.0 * math.atan(1.0 / a)
        assert abs(r.value - exact) <= 1e-9 * exact
        assert r.subdivisions > 10

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            integrate(np.sin, 1.0, 1.0)

    def test_rel_tol_floor(self):
        with pytest.raises(ValueError):
            integrate(np.sin, 0.0, 1.0, rel_tol=1e-14)

    def test_non_integrable_singularity_fails_loudly(self):
        with pytest.raises(MaxDepthExceeded) as err:
            integrate(lambda x: 1.0 / x, 0.0, 1.0)
        assert err.value.estimate > 0.0
        assert err.value.subdivisions < 10_000

    def test_non_finite_sample(self):
        with pytest.raises(NonFiniteSample):
            integrate(lambda x: np.log(x - 2.0), 0.0, 1.0)

    def test_deterministic(self):
        f = lambda x: np.exp(-x) * np.sin(7.0 * x)
        assert integrate(f, 0.0, math.pi).value == integrate(f, 0.0, math.pi).value

    @given(c=st.floats(min_value=0.15, max_value=math.pi - 0.15))
    @settings(max_examples=25, deadline=None, derandomize=True)
    def test_additivity(self, c):
        f = lambda x: np.exp(-x) * np.cos(3.0 * x)
        whole = integrate(f, 0.0, math.pi, rel_tol=1e-12)
        left = integrate(f, 0.0, c, rel_tol=1e-12)
        right = integrate(f, c, math.pi, rel_tol=1e-12)
        budget = whole.error_estimate + left.error_estimate + right.error_estimate
        assert abs(whole.value - (left.value + right.value)) <= budget + 1e-13


class TestEllipticX:
    def test_zero_modulus(self):
        assert abs(elliptic_X(0.0) - math.pi / 2.0) <= 1e-15

    def test_out_of_range(self):
        for chi in (-0.1, 1.0, 1.5):
            with pytest.raises(ModulusOutOfRange):
                elliptic_X(chi)

    def test_near_one_is_finite(self):
        value = elliptic_X(0.999999)
        assert math.isfinite(value)
        assert value > 7.0

    def test_strictly_increasing(self):
        grid = np.linspace(0.0, 0.999, 200)
        values = [elliptic_X(chi) for chi in grid]
        assert all(b > a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("chi", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    def test_agrees_with_quadrature(self, chi):
        # Independent evaluation of the defining integral.
        r = integrate(
            lambda t: 1.0 / np.sqrt(1.0 - chi * chi * np.sin(t) ** 2),
            0.0,
            math.pi / 2.0,
            rel_tol=1e-12,
        )
        assert abs(elliptic_X(chi) - r.value) <= 1e-10
