from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from tracebound import _quad
from tracebound.testfn import (
    COMPLEX,
    REAL,
    PositivityError,
    find_positivity_scale,
    h_eval,
    identity_integral,
    make_test_pair,
    phi_cutoff,
    phi_eval,
    phi_to_hhat,
    place_epsilon,
    round_trip_error,
    scale_pair,
    substitution_identity_residual,
    support_cutoff,
    tanh_identity_residual,
)


def g0(x):
    return math.exp(-1.0 / (1.0 - x * x)) if abs(x) < 1 else 0.0


def g0_fourier(xi):
    """int g0(x) cos(2 pi xi x) dx by adaptive quadrature."""
    val, _ = integrate.quad(lambda x: g0(x) * math.cos(2 * math.pi * xi * x), -1, 1,
                            epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


G1_AT_ZERO = integrate.quad(lambda x: g0(x) ** 2, -1, 1, epsabs=1e-15, epsrel=1e-12)[0]


class TestPlaceKind:
    def test_epsilon(self):
        assert place_epsilon(REAL) == 0
        assert place_epsilon(COMPLEX) == 1

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            place_epsilon("p-adic")


class TestBasePair:
    """Shape of hhat for the default pair."""

    def test_hhat_at_zero(self, pair):
        assert np.isclose(pair.hhat(0.0), 1.0, atol=1e-13)

    def test_support(self, pair):
        assert pair.support_radius <= 1.0
        assert pair.hhat(1.5 * pair.support_radius) == 0.0
        assert pair.hhat(-1.01 * pair.support_radius) == 0.0

    def test_even_and_nonnegative(self, pair):
        x = np.linspace(-1.2, 1.2, 1001)
        vals = pair.hhat(x)
        assert np.all(vals >= 0)
        assert np.allclose(vals, pair.hhat(-x), atol=0)

    def test_interpolant_matches_convolution(self, pair):
        x = np.linspace(0, pair.support_radius, 57)
        assert np.allclose(pair.hhat(x), pair.hhat(x, exact=True), atol=1e-12)
        assert np.allclose(pair.hhat(x, 1), pair.hhat(x, 1, exact=True), atol=1e-10)

    def test_interpolant_order(self, pair):
        assert pair.interpolant(0).k >= 4
        assert pair.interpolant(1).k >= 4

    def test_derivative_against_central_difference(self, pair):
        x = np.linspace(-0.9, 0.9, 31)
        step = 1e-5
        fd = (pair.hhat(x + step, exact=True) - pair.hhat(x - step, exact=True)) / (2 * step)
        assert np.allclose(pair.hhat(x, 1, exact=True), fd, atol=1e-7)

    def test_hhat_is_normalized_self_convolution(self, pair):
        """hhat(x) = g1(x / delta) / g1(0) with g1 = g0 * g0."""
        delta = pair.positivity_scale
        for x in (0.1, 0.37, 0.8):
            y = x / delta
            g1, _ = integrate.quad(lambda s: g0(s) * g0(y - s), -1, 1, epsabs=1e-15, epsrel=1e-13)
            assert np.isclose(pair.hhat(x), g1 / G1_AT_ZERO, atol=1e-12)

    def test_unsupported_derivative_order(self, pair):
        with pytest.raises(ValueError):
            pair.hhat(0.1, deriv=3)


class TestPositivityScale:
    def test_default_search_accepts_full_dilation(self):
        assert find_positivity_scale() == 1.0

    def test_normalized_support(self, pair):
        assert pair.positivity_scale == 0.5
        assert np.isclose(pair.support_radius, 1.0)

    def test_impossible_margin_raises(self):
        with pytest.raises(PositivityError):
            find_positivity_scale(margin=1.5, steps=6)

    def test_bad_bump_support(self):
        with pytest.raises(ValueError):
            find_positivity_scale(bump_support=0.0)


class TestFourierTransform:
    """h against the closed form h(z) = delta ghat0(delta z)^2 / g1(0)."""

    @pytest.mark.parametrize("z", [0.0, 0.3, 1.0, 2.7, 6.0])
    def test_real_points(self, pair, z):
        delta = pair.positivity_scale
        expected = delta * g0_fourier(delta * z) ** 2 / G1_AT_ZERO
        assert np.isclose(h_eval(pair, z), expected, rtol=1e-9, atol=1e-14)

    def test_h_zero_is_integral_of_hhat(self, pair):
        val, _ = integrate.quad(lambda x: float(pair.hhat(x)), -1, 1, epsabs=1e-14, limit=200)
        assert np.isclose(pair.h_zero(), val, rtol=1e-10)

    def test_imaginary_quarter_by_direct_quadrature(self, pair):
        val, _ = integrate.quad(lambda x: float(pair.hhat(x)) * math.exp(math.pi * x / 2), -1, 1,
                                epsabs=1e-14, limit=200)
        h = h_eval(pair, 0.25j)
        assert np.isclose(h, val, rtol=1e-10)
        assert h > 0

    def test_even(self, pair):
        z = np.linspace(0, 5, 11)
        assert np.allclose(h_eval(pair, z), h_eval(pair, -z), atol=0)

    def test_rejects_off_axis_points(self, pair):
        with pytest.raises(ValueError):
            h_eval(pair, 0.2 + 0.1j)

    def test_positive_on_real_and_imaginary_segments(self, pair):
        x = np.linspace(-0.5, 0.5, 1001)
        h0 = pair.h_zero()
        assert np.all(h_eval(pair, x) > 0)
        assert np.all(h_eval(pair, 1j * x) >= h0)

    def test_nonnegative_on_real_line(self, pair):
        x = np.linspace(-60, 60, 24001)
        assert np.all(h_eval(pair, x) >= -1e-15)

    def test_tail_cutoff(self, pair):
        T = pair.h_tail_cutoff()
        x = np.linspace(T, 4 * T, 2001)
        assert np.all(np.abs(pair.h(x)) <= 1e-13 * pair.h_zero())


class TestScaling:
    def test_unit_dilation_is_identity(self, pair):
        assert scale_pair(pair, 1.0) == pair

    def test_double_dilation(self, pair):
        p2 = scale_pair(pair, 2.0)
        assert np.isclose(p2.h_zero(), pair.h_zero() / 2, rtol=1e-13)
        assert np.isclose(p2.support_radius, pair.support_radius / 2)

    @pytest.mark.parametrize("t", [0.5, 2.0, 10.0])
    def test_scaling_identity(self, pair, t):
        pt = scale_pair(pair, t)
        z = np.linspace(0, 8, 33)
        assert np.allclose(h_eval(pt, z), h_eval(pair, z / t) / t, rtol=1e-10, atol=1e-16)
        x = np.linspace(0, 1, 17)
        assert np.allclose(pt.hhat(x), pair.hhat(t * x), atol=1e-15)

    def test_nonpositive_dilation(self, pair):
        with pytest.raises(ValueError):
            scale_pair(pair, 0.0)


class TestSupportCutoff:
    def test_real(self):
        assert np.isclose(support_cutoff(1.0, REAL), 2 * math.cosh(2 * math.pi))
        assert np.isclose(support_cutoff(1.0, REAL), 535.4916555247646)

    def test_complex(self):
        assert np.isclose(support_cutoff(1.0, COMPLEX), 2 * math.cosh(math.pi))

    def test_small_support_tends_to_two(self):
        assert np.isclose(support_cutoff(1e-9, REAL), 2.0)


class TestSphericalFunction:
    @pytest.mark.parametrize("kind", [REAL, COMPLEX])
    def test_vanishes_beyond_cutoff(self, pair, kind):
        r = phi_cutoff(pair, kind) * np.array([1.0, 1.01, 2.0])
        assert np.all(phi_eval(pair, r, kind) == 0)

    def test_complex_at_support_edge(self, pair):
        assert abs(phi_eval(pair, math.pi * pair.support_radius * (1 - 1e-9), COMPLEX)) < 1e-12

    def test_complex_closed_form(self, pair):
        r = np.array([0.3, 1.0, 2.5])
        expected = -pair.hhat(r / math.pi, 1, exact=True) / (2 * math.pi**3 * np.sinh(r))
        assert np.allclose(phi_eval(pair, r, COMPLEX, exact=True), expected, rtol=1e-12)

    def test_complex_small_r_limit(self, pair):
        assert np.isclose(phi_eval(pair, 0.0, COMPLEX), phi_eval(pair, 1e-3, COMPLEX), rtol=1e-5)

    def test_real_against_adaptive_quadrature(self, pair):
        """-1/(4 pi^2) int_{r/2pi}^R hhat'(t) / sqrt(sinh^2(pi t) - sinh^2(r/2)) dt."""
        for r in (0.5, 2.0, 4.0):
            t0 = r / (2 * math.pi)
            s2 = math.sinh(r / 2) ** 2

            def f(t):
                return float(pair.hhat(t, 1, exact=True)) / math.sqrt(math.sinh(math.pi * t) ** 2 - s2)

            # remove the endpoint square-root singularity with t = t0 + w^2
            val, _ = integrate.quad(lambda w: 2 * w * f(t0 + w * w), 0, math.sqrt(1 - t0),
                                    epsabs=1e-13, limit=200)
            assert np.isclose(phi_eval(pair, r, REAL), -val / (4 * math.pi**2), rtol=1e-8)

    @pytest.mark.parametrize("kind", [REAL, COMPLEX])
    def test_identity_value(self, pair, kind):
        assert np.isclose(phi_eval(pair, 0.0, kind), identity_integral(pair, kind), rtol=1e-8)

    def test_identity_integral_by_quadrature(self, pair):
        val, _ = integrate.quad(lambda x: x * pair.h(x) * math.tanh(math.pi * x), 0, 60,
                                epsabs=1e-14, limit=400)
        assert np.isclose(identity_integral(pair, REAL), 2 * val / (4 * math.pi), rtol=1e-9)
        val, _ = integrate.quad(lambda x: x * x * pair.h(x), 0, 60, epsabs=1e-14, limit=400)
        assert np.isclose(identity_integral(pair, COMPLEX), 2 * val * 2 / math.pi**2, rtol=1e-9)


class TestRoundTrip:
    @pytest.mark.parametrize("kind", [REAL, COMPLEX])
    @pytest.mark.parametrize("a", [1.0, 0.5, 0.3])
    def test_round_trip(self, pair, kind, a):
        assert round_trip_error(scale_pair(pair, a), kind) <= 1e-6

    @pytest.mark.parametrize("kind", [REAL, COMPLEX])
    def test_special_points(self, pair, kind):
        t = np.array([0.0, pair.support_radius / 2, 1.1 * pair.support_radius])
        back = phi_to_hhat(lambda r: phi_eval(pair, r, kind), t, kind, phi_cutoff(pair, kind))
        assert np.isclose(back[0], 1.0, atol=1e-8)
        assert np.isclose(back[1], pair.hhat(t[1]), atol=1e-8)
        assert back[2] == 0.0


class TestIdentities:
    @pytest.mark.parametrize("x", [0.25, 1.0, 2.0])
    def test_tanh_integral(self, x):
        assert abs(tanh_identity_residual(x)) <= 1e-8

    @pytest.mark.parametrize("t,x", [(0.0, 0.3), (0.1, 0.5), (0.4, 0.45), (1.0, 2.0)])
    def test_substitution(self, t, x):
        assert abs(substitution_identity_residual(t, x)) <= 1e-6

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.0, 1.5), st.floats(0.01, 1.0))
    def test_substitution_property(self, t, gap):
        assert abs(substitution_identity_residual(t, t + gap)) <= 1e-6

    def test_substitution_needs_ordered_points(self):
        with pytest.raises(ValueError):
            substitution_identity_residual(0.5, 0.2)


class TestToleranceOverride:
    def test_default(self, monkeypatch):
        monkeypatch.delenv("TRACE_BOUND_TOL", raising=False)
        assert _quad.quad_tol() == _quad.DEFAULT_TOL

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("TRACE_BOUND_TOL", "1e-6")
        assert _quad.quad_tol() == 1e-6

    def test_rejects_nonpositive(self, monkeypatch):
        monkeypatch.setenv("TRACE_BOUND_TOL", "0")
        with pytest.raises(ValueError):
            _quad.quad_tol()


class TestPositivityProperty:
    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.0, 0.5))
    def test_imaginary_axis_dominates(self, x):
        pair = make_test_pair()
        assert h_eval(pair, 1j * x) >= pair.h_zero()
