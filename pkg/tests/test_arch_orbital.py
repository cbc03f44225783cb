from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special
from sympy import primerange

from tracebound import arch_orbital as ao
from tracebound import local_orbital as lo
from tracebound.numfield import NumberField, factor_ideal, make_field, zeta_tools
from tracebound.testfn import COMPLEX, REAL, phi_eval, scale_pair


def hhat_quad(pair, func, lo_=0.0):
    """int_lo^R hhat(t) func(t) dt by adaptive quadrature."""
    R = pair.support_radius
    if lo_ >= R:
        return 0.0
    val, _ = integrate.quad(lambda t: float(pair.hhat(t)) * func(t), lo_, R, limit=200,
                            epsabs=1e-13, epsrel=1e-12)
    return val


def completed_zeta_q(s):
    return mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2) * mpmath.zeta(s)


class TestIdentity:
    def test_real_matches_phi_at_origin(self, pair):
        assert abs(ao.identity_contribution(pair, REAL) - float(phi_eval(pair, 0.0, REAL))) <= 1e-6

    def test_complex_matches_phi_at_origin(self, pair):
        assert abs(ao.identity_contribution(pair, COMPLEX) - float(phi_eval(pair, 0.0, COMPLEX))) <= 1e-6

    def test_real_against_quad(self, pair):
        T = pair.h_tail_cutoff()
        val, _ = integrate.quad(lambda x: x * pair.h(x) * math.tanh(math.pi * x), 0, T, limit=400)
        assert np.isclose(ao.identity_contribution(pair, REAL), 2 * val / (4 * math.pi), rtol=1e-8)

    @pytest.mark.parametrize("a", [0.2, 0.5])
    def test_complex_scaling(self, pair, a):
        """With h_a(x) = h(x/a)/a the complex integral is a^3 h_a(0) times a constant."""
        base = ao.identity_contribution(pair, COMPLEX) / pair.h_zero()
        scaled = scale_pair(pair, a)
        ratio = ao.identity_contribution(scaled, COMPLEX) / (a**3 * scaled.h_zero())
        assert np.isclose(ratio, base, rtol=1e-6)

    @pytest.mark.parametrize("a", [0.2, 0.5])
    def test_real_scaling(self, pair, a):
        """tanh(pi a y) lies in [a tanh(pi y), tanh(pi y)], so the ratio to a^2 h_a(0) is pinned."""
        base = ao.identity_contribution(pair, REAL) / pair.h_zero()
        scaled = scale_pair(pair, a)
        ratio = ao.identity_contribution(scaled, REAL) / (a**2 * scaled.h_zero())
        assert a * base * (1 - 1e-8) <= ratio <= base * (1 + 1e-8)


class TestEllipticArch:
    def test_split_real_closed_form(self, pair):
        m, u = 3.0, 1.0
        alpha = ao.elliptic_alpha(m, u, REAL)
        expected = math.sqrt(alpha) / (2 * math.pi * abs(alpha - 1)) * float(pair.hhat(math.log(alpha) / (2 * math.pi)))
        assert np.isclose(ao.arch_elliptic(pair, REAL, m, u), expected)

    def test_alpha_chooses_outer_root(self):
        alpha = ao.elliptic_alpha(3.0, 1.0, REAL)
        assert np.isclose(alpha, (3 + math.sqrt(5)) / (3 - math.sqrt(5)))
        assert abs(ao.elliptic_alpha(1 + 1j, 2.0, COMPLEX)) >= 1

    def test_split_vanishes_beyond_support_real(self, pair):
        R = pair.support_radius
        # alpha = e^x has m/sqrt(u) = 2 cosh(x/2) with u = 1
        for x, zero in ((2 * math.pi * R * 1.01, True), (2 * math.pi * R * 0.99, False)):
            m = 2 * math.cosh(x / 2)
            val = ao.arch_elliptic(pair, REAL, m, 1.0)
            assert (val == 0.0) == zero

    def test_split_vanishes_beyond_support_complex(self, pair):
        R = pair.support_radius
        for x, zero in ((math.pi * R * 1.01, True), (math.pi * R * 0.99, False)):
            m = 2 * cmath.cosh(complex(x, 0.3) / 2)
            val = ao.arch_elliptic(pair, COMPLEX, m, 1.0)
            assert (val == 0.0) == zero

    def test_negative_ratio_real_is_zero(self, pair):
        assert ao.arch_elliptic(pair, REAL, 3.0, -1.0) == 0.0

    def test_bound_near_one(self, pair):
        m, u = 2.0 + 1e-4, 1.0
        D = m * m - 4 * u
        assert np.isclose(ao.arch_elliptic(pair, REAL, m, u, mode="bound"), math.sqrt(u / D) / (2 * math.pi))

    def test_split_exact_below_bound(self, pair):
        rng = np.random.default_rng(3)
        for _ in range(100):
            u = float(rng.uniform(0.1, 5))
            m = float(rng.uniform(-10, 10))
            if m * m - 4 * u <= 1e-9:
                continue
            assert ao.arch_elliptic(pair, REAL, m, u) <= ao.arch_elliptic(pair, REAL, m, u, mode="bound") * (1 + 1e-6)
            mc, uc = complex(*rng.uniform(-5, 5, 2)), complex(*rng.uniform(-5, 5, 2))
            assert ao.arch_elliptic(pair, COMPLEX, mc, uc) <= ao.arch_elliptic(pair, COMPLEX, mc, uc, mode="bound") * (1 + 1e-6)

    def test_nonsplit_m_zero(self, pair):
        """With m = 0 the integrand collapses to 1/cosh(pi x)."""
        val = 2 * hhat_quad(pair, lambda x: 1 / math.cosh(math.pi * x)) / (4 * math.sqrt(2))
        assert np.isclose(ao.arch_elliptic(pair, REAL, 0.0, 3.0), val, rtol=1e-8)

    def test_nonsplit_against_quad(self, pair):
        m, u = 1.0, 2.0
        c = (4 * u - m * m) / (4 * u)
        f = lambda x: math.cosh(math.pi * x) / (math.sinh(math.pi * x) ** 2 + c)
        assert np.isclose(ao.arch_elliptic(pair, REAL, m, u), 2 * hhat_quad(pair, f) / (4 * math.sqrt(2)), rtol=1e-8)

    def test_nonsplit_below_bound(self, pair):
        rng = np.random.default_rng(5)
        checked = 0
        while checked < 100:
            a = float(rng.choice([0.3, 0.5, 1.0]))
            p = scale_pair(pair, a)
            u = float(rng.uniform(0.05, 20))
            m = float(rng.uniform(-2 * math.sqrt(u), 2 * math.sqrt(u)))
            if 4 * u - m * m <= 1e-9:
                continue
            exact = ao.arch_elliptic(p, REAL, m, u)
            bound = ao.arch_elliptic(p, REAL, m, u, mode="bound")
            assert exact <= bound * (1 + 1e-9)
            checked += 1

    def test_rejects_parabolic(self, pair):
        with pytest.raises(ValueError):
            ao.arch_elliptic(pair, REAL, 2.0, 1.0)

    def test_rejects_unknown_mode(self, pair):
        with pytest.raises(ValueError):
            ao.arch_elliptic(pair, REAL, 3.0, 1.0, mode="fast")


class TestHyperbolicArch:
    def test_real_negative_is_zero(self, pair):
        assert ao.arch_hyperbolic(pair, REAL, -1.0) == 0.0
        assert ao.arch_hyperbolic(pair, REAL, -1.0, weighted=True) == 0.0

    def test_unweighted_bound(self, pair):
        assert np.isclose(ao.arch_hyperbolic(pair, REAL, 4.0), 2 / (2 * math.pi * 3))
        assert np.isclose(ao.arch_hyperbolic(pair, COMPLEX, 2j), 2 * 2 / (2 * math.pi * 5))

    def test_complex_minus_one_weighted(self, pair):
        expected = -2 / 4 * hhat_quad(pair, lambda t: math.sinh(math.pi * t) / (math.cosh(math.pi * t) + 1))
        assert np.isclose(ao.arch_hyperbolic(pair, COMPLEX, -1.0, weighted=True), expected, rtol=1e-8)

    def test_real_weighted_against_quad(self, pair):
        alpha = 1.7
        lo_ = math.log(alpha) / (2 * math.pi)
        expected = 2 * alpha / (alpha - 1) ** 2 * hhat_quad(pair, lambda t: math.cosh(math.pi * t), lo_)
        assert np.isclose(ao.arch_hyperbolic(pair, REAL, alpha, weighted=True), expected, rtol=1e-8)

    def test_real_weighted_outside_window(self, pair):
        alpha = math.exp(2 * math.pi * pair.support_radius * 1.05)
        assert ao.arch_hyperbolic(pair, REAL, alpha, weighted=True) == 0.0

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.2, 5.0), st.floats(-math.pi, math.pi))
    def test_weighted_inversion_symmetry(self, r, theta):
        from tracebound.testfn import make_test_pair

        pair = make_test_pair()
        alpha = cmath.rect(r, theta)
        if abs(alpha - 1) < 1e-3:
            return
        inv = 1 / alpha.conjugate()
        a = ao.arch_hyperbolic(pair, COMPLEX, alpha, weighted=True)
        b = ao.arch_hyperbolic(pair, COMPLEX, inv, weighted=True)
        assert np.isclose(a, b, rtol=1e-9, atol=1e-14)
        if abs(r - 1) > 1e-3:
            ra = ao.arch_hyperbolic(pair, REAL, r, weighted=True)
            rb = ao.arch_hyperbolic(pair, REAL, 1 / r, weighted=True)
            assert np.isclose(ra, rb, rtol=1e-9, atol=1e-14)

    def test_exact_real_weighted_below_bound(self, pair):
        for alpha in (1.2, 2.0, 5.0, 30.0):
            exact = ao.arch_hyperbolic(pair, REAL, alpha, weighted=True, mode="exact")
            bound = ao.arch_hyperbolic(pair, REAL, alpha, weighted=True)
            assert abs(exact) <= bound * (1 + 1e-9)

    def test_rejects_identity(self, pair):
        with pytest.raises(ValueError):
            ao.arch_hyperbolic(pair, REAL, 1.0)
        with pytest.raises(ValueError):
            ao.arch_hyperbolic(pair, REAL, 2.0, mode="guess")


class TestParabolic:
    def test_values(self, pair):
        assert ao.arch_parabolic(pair, REAL) == pytest.approx(1 / (4 * math.pi), rel=1e-14)
        assert ao.arch_parabolic(pair, COMPLEX) == pytest.approx(1 / math.pi**2, rel=1e-14)

    def test_value_uses_hhat_zero(self, pair):
        assert np.isclose(ao.parabolic_value(scale_pair(pair, 0.4), REAL), 1 / (4 * math.pi))

    @pytest.mark.parametrize("kind", [REAL, COMPLEX])
    def test_value_matches_defining_integral(self, pair, kind):
        assert np.isclose(ao.parabolic_zeta_direct(pair, kind), ao.parabolic_value(pair, kind), rtol=1e-7)

    @pytest.mark.parametrize("kind", [REAL, COMPLEX])
    @pytest.mark.parametrize("a", [0.8, 0.45])
    def test_derivative_held_out(self, pair, kind, a):
        """The fitted three-constant form predicts the defining integral at unseen dilations."""
        p = scale_pair(pair, a)
        direct = ao.parabolic_zeta_direct(p, kind, derivative=True)
        assert np.isclose(ao.arch_parabolic(p, kind, derivative=True), direct, rtol=1e-6, atol=1e-9)

    def test_fitted_constants_closed_forms(self):
        g = float(np.euler_gamma)
        real = ao.parabolic_constants(REAL)
        assert np.allclose([real.c1, real.c2, real.c3],
                           [-(g + math.log(2)) / (4 * math.pi), 1 / 8, -1 / (4 * math.pi)], rtol=1e-5)
        cplx = ao.parabolic_constants(COMPLEX)
        assert np.allclose([cplx.c1, cplx.c2, cplx.c3],
                           [-2 * g / math.pi**2, 1 / (2 * math.pi), -2 / math.pi**2], rtol=1e-5)

    def test_digamma_majorant(self):
        y = np.linspace(0, 500, 20001)
        assert np.all(np.abs(np.real(special.digamma(1 + 1j * y))) <= ao.PSI_A + ao.PSI_B * y)

    @pytest.mark.parametrize("kind", [REAL, COMPLEX])
    @pytest.mark.parametrize("a", [1.0, 0.5, 0.3])
    def test_derivative_majorant(self, pair, kind, a):
        p = scale_pair(pair, a)
        assert abs(ao.arch_parabolic(p, kind, derivative=True)) <= ao.parabolic_derivative_majorant(p, kind)


class TestIntertwining:
    def test_half(self):
        assert abs(ao.arch_intertwining(REAL, 0.5) - math.pi) <= 1e-10
        assert abs(ao.arch_intertwining(COMPLEX, 0.5) - math.pi) <= 1e-10

    def test_complex_identity(self):
        s = np.array([0.3, 1.0, 2.5, 0.7 + 2j])
        assert np.allclose(ao.arch_intertwining(COMPLEX, s), np.pi / (2 * s))

    def test_poles(self):
        with pytest.raises(ZeroDivisionError):
            ao.arch_intertwining(REAL, 0.0)
        with pytest.raises(ZeroDivisionError):
            ao.arch_intertwining(REAL, -2.0)
        with pytest.raises(ZeroDivisionError):
            ao.arch_intertwining(COMPLEX, -0.5)

    @pytest.mark.parametrize("s", [0.75, 1.0, 1.5])
    def test_global_product_for_rationals(self, s):
        """arch x prod_p of local scalars reproduces Lambda(2s) / Lambda(2s + 1) over Q."""
        P = 100_000
        prod = complex(ao.arch_intertwining(REAL, s)).real
        for p in primerange(2, P):
            prod *= lo.finite_intertwining(p, s)
        Z = zeta_tools(make_field("Q"))
        target = float(np.real(Z.completed(2 * s) / Z.completed(2 * s + 1)))
        # the omitted primes change the product by at most about 2 sum_{p >= P} p^(-2s)
        tail = 2 * P ** (1 - 2 * s) / ((2 * s - 1) * math.log(P))
        assert abs(prod / target - 1) <= tail
        oracle = float(completed_zeta_q(2 * s) / completed_zeta_q(2 * s + 1))
        assert np.isclose(target, oracle, rtol=1e-9)


class TestContinuous:
    def test_eisenstein_dim_zero(self, pair):
        Z = zeta_tools(make_field("Q"))
        ideal = factor_ideal(Z.field, 7)
        assert ao.eisenstein_term(Z, [pair], ideal, 0) == 0.0
        assert ao.eisenstein_term(Z, [pair], ideal, 0, mode="bound") == 0.0

    def test_integrand_at_one(self, pair):
        Z = zeta_tools(make_field("Q"))
        ld = lambda s: mpmath.diff(completed_zeta_q, s) / completed_zeta_q(s)
        oracle = complex(ld(mpmath.mpc(0, 2)) - ld(mpmath.mpc(1, 2)))
        kernel = float(Z.eisenstein_kernel(1.0))
        assert abs(kernel - oracle.real) <= 1e-6
        assert abs(kernel * float(pair.h(1.0)) - oracle.real * float(pair.h(1.0))) <= 1e-6

    def test_bound_linear_in_level_and_dim(self, pair):
        Z = zeta_tools(make_field("Q"))
        i1, i2 = factor_ideal(Z.field, 1), factor_ideal(Z.field, 11)
        b1 = ao.eisenstein_term(Z, [pair], i1, 2, mode="bound")
        b2 = ao.eisenstein_term(Z, [pair], i2, 4, mode="bound")
        assert np.isclose(b2 / b1, (i2.A_J * 4) / (i1.A_J * 2), rtol=1e-14)

    @pytest.mark.parametrize("d", [1, -1, 5])
    @pytest.mark.parametrize("a", [1.0, 0.5])
    def test_numeric_below_bound(self, pair, d, a):
        F = make_field("Q") if d == 1 else NumberField(d)
        Z = zeta_tools(F)
        pairs = [scale_pair(pair, a)] * len(F.infinite_places)
        ideal = factor_ideal(F, 3)
        num = ao.eisenstein_term(Z, pairs, ideal, 2)
        assert abs(num) <= ao.eisenstein_term(Z, pairs, ideal, 2, mode="bound")

    def test_majorant_covers_kernel(self):
        Z = zeta_tools(make_field("Q"))
        c1, c2 = ao.eisenstein_majorant(Z)
        t = np.linspace(1e-4, 50, 3001)
        assert np.all(np.abs(Z.eisenstein_kernel(t)) <= c1 + c2 * t)

    def test_residual_ratio_oracle(self):
        with mpmath.workdps(40):
            s = mpmath.mpf("1e-10")
            oracle = float(completed_zeta_q(2 * s) / completed_zeta_q(2 * s + 1))
        assert np.isclose(zeta_tools(make_field("Q")).ratio_limit, oracle, atol=1e-8)

    def test_residual_sign_and_dim(self, pair):
        Z = zeta_tools(make_field("Q"))
        ideal = factor_ideal(Z.field, 5)
        val = ao.residual_term(Z, [pair], ideal, 2)
        # the limit is negative, so the leading minus sign makes the term positive
        assert Z.ratio_limit < 0 < val
        expected = -(2.0**-3) * Z.ratio_limit * ideal.A_J * pair.h_zero() * 2
        assert np.isclose(val, expected, rtol=1e-14)
        assert ao.residual_term(Z, [pair], ideal, 0) == 0.0

    def test_one_dim_exact(self, pair):
        ideal = factor_ideal(make_field("Q"), 1)
        val, _ = integrate.quad(lambda x: float(pair.hhat(x)) * math.cosh(math.pi * x), -1, 1, epsrel=1e-12)
        assert np.isclose(ao.one_dim_term([pair], ideal), val, rtol=1e-9)

    @pytest.mark.parametrize("a", [1.0, 0.5, 0.3])
    def test_one_dim_window(self, pair, a):
        p = scale_pair(pair, a)
        ideal = factor_ideal(make_field("Q"), 13)
        exact = ao.one_dim_term([p], ideal)
        assert ideal.A_J * p.h_zero() <= exact <= ao.one_dim_term([p], ideal, mode="bound")
        assert np.isclose(ao.one_dim_term([p], ideal, mode="bound"),
                          ideal.A_J * math.exp(math.pi / a) * p.h_zero())

    def test_one_dim_rejects_mode(self, pair):
        with pytest.raises(ValueError):
            ao.one_dim_term([pair], factor_ideal(make_field("Q"), 1), mode="guess")
