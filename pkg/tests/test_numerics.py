"""Numerical kernel checks: Laplace inversion, quadrature, special functions.

Frozen reference values were produced by independent oracles (mpmath
arbitrary-precision series and quadrature); see the repository notes for the
generating script.
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ctrwpricer import AccuracyError, QuadSpec, TailBoundError
from ctrwpricer.errors import InvalidParametersError
from ctrwpricer.numerics import (
    DEFAULT_QUAD,
    LaplaceFn,
    bessel_i1_scaled,
    expm1_complex,
    integrate_real_line,
    integrate_semi_infinite,
    laplace_invert,
    laplace_invert_euler,
    laplace_invert_talbot,
    log_normal_cdf,
    normal_cdf,
)


def i1_scaled_series(u: float) -> float:
    """Power-series oracle: e^{-u} sum_k (u/2)^{2k+1} / (k! (k+1)!)."""
    total, term = 0.0, u / 2.0
    for k in range(1, 80):
        total += term
        term *= (u / 2.0) ** 2 / (k * (k + 1))
        if term < 1e-20 * max(total, 1.0):
            break
    return math.exp(-u) * total


class TestLaplaceInversion:
    def test_textbook_exponential_pair(self):
        val = laplace_invert(LaplaceFn(lambda s: 1.0 / (s + 2.0), abscissa=-2.0), 1.0)
        assert abs(val - 0.13533528323661269) <= 1e-9 * 0.14

    def test_textbook_step_pair(self):
        assert abs(laplace_invert(lambda s: 1.0 / s, 7.3) - 1.0) <= 1e-8

    def test_textbook_sine_pair(self):
        val = laplace_invert(lambda s: 1.0 / (s * s + 1.0), math.pi / 2.0)
        assert abs(val - 1.0) <= 1e-8

    @pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
    def test_three_pair_families_relative_error(self, t):
        pairs = [
            (LaplaceFn(lambda s: 1.0 / (s + 1.0), abscissa=-1.0), math.exp(-t)),
            (LaplaceFn(lambda s: 1.0 / (s + 1.0) ** 2, abscissa=-1.0), t * math.exp(-t)),
            (LaplaceFn(lambda s: 1.0 / (s * s + 1.0), abscissa=0.0), math.sin(t)),
        ]
        for fhat, exact in pairs:
            val = laplace_invert(fhat, t)
            assert abs(val - exact) <= 1e-8 * abs(exact)

    @pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
    def test_euler_agrees_with_talbot(self, t):
        for fhat in (lambda s: 1.0 / (s + 2.0), lambda s: 1.0 / (s * (s + 1.0))):
            tv = laplace_invert_talbot(fhat, t)
            ev = laplace_invert_euler(fhat, t)
            assert abs(tv - ev) <= 1e-7

    def test_abscissa_shift_handles_growing_transform(self):
        # f(t) = e^{t} has its singularity at s=1, right of the default contour
        f = LaplaceFn(lambda s: 1.0 / (s - 1.0), abscissa=1.0)
        val = laplace_invert(f, 2.0)
        assert abs(val - math.exp(2.0)) <= 1e-7 * math.exp(2.0)

    def test_invalid_time_rejected(self):
        with pytest.raises(InvalidParametersError):
            laplace_invert(lambda s: 1.0 / s, 0.0)

    def test_deterministic(self):
        f = lambda s: 1.0 / (s + 0.3) ** 2
        assert laplace_invert(f, 3.0) == laplace_invert(f, 3.0)


class TestSpecialFunctions:
    def test_i1_scaled_at_zero(self):
        assert bessel_i1_scaled(0.0) == 0.0

    def test_i1_scaled_at_one(self):
        assert abs(bessel_i1_scaled(1.0) - 0.20791041534970845) <= 1e-12

    def test_i1_scaled_large_argument(self):
        assert abs(bessel_i1_scaled(700.0) - 0.015070519444716847) <= 1e-12
        asym = 1.0 / math.sqrt(2.0 * math.pi * 700.0) * (1.0 - 3.0 / (8.0 * 700.0))
        assert abs(bessel_i1_scaled(700.0) - asym) <= 1e-6

    @pytest.mark.parametrize("u", np.geomspace(1e-3, 30.0, 20))
    def test_i1_scaled_matches_series_oracle(self, u):
        assert abs(bessel_i1_scaled(u) - i1_scaled_series(u)) <= 1e-12 * max(
            1.0, i1_scaled_series(u)
        )

    def test_normal_cdf_reference_points(self):
        assert normal_cdf(0.0) == 0.5
        assert abs(normal_cdf(1.96) - 0.97500210485177956) <= 1e-15
        assert abs(normal_cdf(-8.0) - 6.2209605742717841e-16) <= 1e-25

    @given(st.floats(-30.0, 30.0))
    def test_normal_cdf_symmetry(self, z):
        assert abs(normal_cdf(z) + normal_cdf(-z) - 1.0) <= 1e-15

    def test_log_normal_cdf_deep_tail(self):
        # direct cdf underflows near z=-40; the log form must not
        assert abs(log_normal_cdf(-8.0) - math.log(6.2209605742717841e-16)) <= 1e-10
        assert math.isfinite(log_normal_cdf(-300.0))

    @given(st.floats(-20.0, 3.0), st.floats(-20.0, 20.0))
    def test_expm1_complex_matches_reference(self, re, im):
        w = complex(re, im)
        ref = complex(np.expm1(re) * math.cos(im) - 2.0 * math.sin(im / 2.0) ** 2,
                      math.exp(re) * math.sin(im))
        got = expm1_complex(w)
        assert abs(got - ref) <= 1e-13 * max(1.0, abs(ref))


class TestSemiInfiniteQuadrature:
    def test_plain_exponential(self):
        val = integrate_semi_infinite(lambda u: math.exp(-u), bumps=[(0.0, 4.0)])
        assert abs(val - 1.0) <= 1e-10

    def test_gaussian_moment(self):
        val = integrate_semi_infinite(lambda u: u * math.exp(-u * u), bumps=[(0.0, 1.0)])
        assert abs(val - 0.5) <= 1e-10

    @pytest.mark.parametrize(
        "c, exact",
        [(0.0125, 0.012578451540634377), (1.0, 1.7182818284590452)],
    )
    def test_bessel_mass_identity(self, c, exact):
        # int_0^inf 2 I1(2u) e^{-u^2/c} du = e^c - 1, written with the scaled
        # Bessel function so nothing overflows
        g = lambda u: 2.0 * bessel_i1_scaled(2.0 * u) * math.exp(2.0 * u - u * u / c)
        val = integrate_semi_infinite(g, bumps=[(c, math.sqrt(c / 2.0) + 1e-12)])
        assert abs(val - exact) <= 1e-9 * max(1.0, exact)


class TestRealLineQuadrature:
    def test_lorentzian(self):
        val = integrate_real_line(lambda w: 1.0 / (1.0 + w * w), 2.0, DEFAULT_QUAD)
        assert abs(val - math.pi) <= 1e-9

    def test_gaussian(self):
        val = integrate_real_line(lambda w: np.exp(-0.5 * w * w), 4.0, DEFAULT_QUAD)
        assert abs(val - math.sqrt(2.0 * math.pi)) <= 1e-9

    def test_complex_integrand_real_result(self):
        # e^{-w^2/2 - iw} integrates to sqrt(2 pi) e^{-1/2}
        g = lambda w: np.exp(-0.5 * w * w - 1j * w)
        val = integrate_real_line(g, 4.0, DEFAULT_QUAD)
        assert abs(val - math.sqrt(2.0 * math.pi) * math.exp(-0.5)) <= 1e-9

    def test_tail_bound_violation_detected(self):
        # claims cubic decay but only decays like 1/w^1.2: the probe must object
        g = lambda w: 1.0 / (1.0 + abs(w)) ** 1.2
        with pytest.raises(TailBoundError):
            integrate_real_line(g, 3.0, QuadSpec(rel_tol=1e-9, abs_tol=1e-8))

    def test_node_budget_exhaustion_raises(self):
        spec = QuadSpec(rel_tol=1e-9, abs_tol=1e-10, max_nodes=1 << 10)
        with pytest.raises(AccuracyError):
            integrate_real_line(lambda w: np.cos(500.0 * w) / (1.0 + w * w), 2.0, spec)


class TestQuadSpec:
    def test_tolerances_must_be_positive(self):
        with pytest.raises(InvalidParametersError):
            QuadSpec(rel_tol=0.0, abs_tol=1e-10)
        with pytest.raises(InvalidParametersError):
            QuadSpec(rel_tol=1e-9, abs_tol=-1.0)
