import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from impulsewave import analytic as an
from impulsewave.core import ChipDistribution

KINDS = ("uniform", "raised_cosine")


def right_slope(f, h=1e-4):
    """One-sided derivative at 0+ with one Richardson step (removes the O(h) term)."""
    d1 = (f(h) - f(0.0)) / h
    d2 = (f(h / 2) - f(0.0)) / (h / 2)
    return 2 * d2 - d1


def fourier_oracle(acf, omega, support):
    """2 * integral_0^support R(tau) cos(w tau) dtau by adaptive quadrature."""
    val, _ = integrate.quad(acf, 0.0, support, weight="cos", wvar=omega, limit=400)
    return 2 * val


class TestTelegraph:
    def test_acf_values(self):
        assert an.acf_telegraph(1.0, 0.0) == 1.0
        assert an.acf_telegraph(1.0, 0.5) == pytest.approx(math.exp(-1))
        assert an.acf_telegraph(1.0, 50.0) < 1e-40

    def test_psd_values(self):
        assert an.psd_telegraph(1.0, 0.0) == 1.0
        assert an.psd_telegraph(3.0, 6.0) == pytest.approx(0.5 * an.psd_telegraph(3.0, 0.0))
        assert an.psd_telegraph(1.0, 1e8) < 1e-15

    @pytest.mark.parametrize("omega", [0.0, 0.7, 3.0, 9.0])
    def test_psd_is_fourier_transform(self, omega):
        ref = fourier_oracle(lambda t: an.acf_telegraph(1.0, t), omega, 40.0)
        assert an.psd_telegraph(1.0, omega) == pytest.approx(ref, rel=1e-7)


class TestArcsine:
    @pytest.mark.parametrize("r, expected", [(1.0, 1.0), (0.5, 1 / 3), (0.0, 0.0)])
    def test_values(self, r, expected):
        assert an.acf_arcsine(r) == pytest.approx(expected, abs=1e-15)

    def test_domain(self):
        with pytest.raises(ValueError):
            an.acf_arcsine(1.0001)

    def test_rice_rate_of_both_inputs(self):
        # -r''(0) = (pi n0)^2 for both normalized correlations, by finite differences
        for rx in (an.rx_gaussian, an.rx_uniform_band):
            h = 1e-3
            second = (rx(0.7, h) - 2 * rx(0.7, 0.0) + rx(0.7, -h)) / h**2
            assert math.sqrt(-second) / math.pi == pytest.approx(0.7, rel=1e-6)

    def test_sinc_case_goes_slightly_negative(self):
        taus = np.linspace(0, 3, 3001)
        assert np.min(an.acf_hardlimited("uniform_band", 1.0, taus)) < 0


class TestInterferogramGaussian:
    def test_right_limit_is_one(self):
        assert an.interferogram_mean_gaussian(1.0, 1e-6) == pytest.approx(1.0, abs=1e-6)
        assert an.interferogram_mean_gaussian(1.0, 0.0) == 1.0

    def test_odd(self):
        t = np.linspace(0.01, 3, 50)
        np.testing.assert_allclose(an.interferogram_mean_gaussian(1.3, -t), -an.interferogram_mean_gaussian(1.3, t))

    @pytest.mark.parametrize("n0, tau", [(1.0, 1.0), (1.0, 0.3), (2.5, 0.2)])
    def test_matches_finite_difference_of_arcsine_law(self, n0, tau):
        h = 1e-6
        acf = lambda t: an.acf_hardlimited("gaussian", n0, t)  # noqa: E731
        deriv = (acf(tau + h) - acf(tau - h)) / (2 * h)
        assert an.interferogram_mean_gaussian(n0, tau) == pytest.approx(-deriv / (2 * n0), rel=1e-6)


class TestBernoulli:
    def test_triangle(self):
        assert an.acf_triangle(1.0, 0.0) == 1.0
        assert an.acf_triangle(1.0, 0.5) == 0.5
        assert an.acf_triangle(1.0, 2.0) == 0.0

    def test_psd_limits(self):
        assert an.psd_bernoulli(2.0, 0.0) == pytest.approx(2.0)
        assert an.psd_bernoulli(2.0, 1e-5) == pytest.approx(2.0, rel=1e-9)
        assert an.psd_bernoulli(1.0, 2 * np.pi) == pytest.approx(0.0, abs=1e-30)
        w = np.linspace(0.1, 30, 40)
        np.testing.assert_allclose(an.psd_bernoulli(1.3, w), an.psd_bernoulli(1.3, -w))
        np.testing.assert_allclose(an.psd_bernoulli(1.3, w), 4 * np.sin(w * 1.3 / 2) ** 2 / (w**2 * 1.3), rtol=1e-12)


class TestModel:
    def test_middle_branch(self):
        assert an.acf_model(an.ModelParams(1.0, 1.0), 1.0) == pytest.approx(0.25)

    def test_alpha_zero_is_triangle(self):
        t = np.linspace(-3, 3, 601)
        np.testing.assert_array_equal(an.acf_model(an.ModelParams(1.0, 0.0), t), an.acf_triangle(1.0, t))

    @pytest.mark.parametrize("alpha", [0.1, 0.5, 1.0])
    def test_smooth_landing(self, alpha):
        p = an.ModelParams(1.0, alpha)
        edge = 1 + alpha
        assert an.acf_model(p, edge) == 0.0
        assert (an.acf_model(p, edge) - an.acf_model(p, edge - 1e-6)) / 1e-6 == pytest.approx(0.0, abs=1e-5)
        # the parabola meets the triangle with value alpha and slope -1
        assert an.acf_model(p, 1 - alpha + 1e-12) == pytest.approx(alpha, abs=1e-9)
        assert an.acf_model_derivative(p, 1 - alpha + 1e-9) == pytest.approx(-1.0, abs=1e-6)

    def test_scaling_in_t_c(self):
        t = np.linspace(0, 6, 61)
        np.testing.assert_allclose(an.acf_model(an.ModelParams(2.0, 0.4), t), an.acf_model(an.ModelParams(1.0, 0.4), t / 2))

    @given(st.floats(0, 1), st.floats(-3, 3))
    def test_conditions_b_c(self, alpha, tau):
        p = an.ModelParams(1.0, alpha)
        f = lambda t: float(an.acf_model(p, t))  # noqa: E731
        assert f(tau) == f(-tau)
        assert f(tau) ** 2 <= 0.5 * (1 + f(2 * tau)) + 1e-15

    def test_derivative_matches_finite_difference(self):
        p = an.ModelParams(1.0, 0.6)
        t = np.linspace(0.05, 1.95, 39)
        fd = (an.acf_model(p, t + 1e-7) - an.acf_model(p, t - 1e-7)) / 2e-7
        np.testing.assert_allclose(an.acf_model_derivative(p, t), fd, atol=1e-6)


class TestFromCdf:
    @pytest.mark.parametrize("alpha", [0.1, 0.25, 0.5, 1.0])
    def test_uniform_equals_model(self, alpha):
        t = np.linspace(-2.5, 2.5, 251)
        np.testing.assert_allclose(
            an.acf_from_cdf(ChipDistribution.uniform(1.0, alpha), t), an.acf_model(an.ModelParams(1.0, alpha), t), atol=1e-9
        )

    def test_degenerate_is_triangle(self):
        t = np.linspace(0, 3, 61)
        np.testing.assert_allclose(an.acf_from_cdf(ChipDistribution.degenerate(1.5), t), an.acf_triangle(1.5, t), atol=1e-12)

    def test_raised_cosine_closed_form(self):
        t = np.linspace(-2.5, 2.5, 201)
        np.testing.assert_allclose(
            an.acf_from_cdf(ChipDistribution.raised_cosine(1.0, 1.0), t), an.acf_raised_cosine_full(1.0, t), atol=1e-9
        )

    def test_derivative_examples(self):
        for d in (ChipDistribution.degenerate(2.0), ChipDistribution.uniform(2.0, 0.5), ChipDistribution.raised_cosine(2.0, 1.0)):
            assert an.acf_derivative_from_cdf(d, 1e-12) == -0.5
            assert an.acf_derivative_from_cdf(d, 2.0 * (1 + d.alpha) + 1e-9) == 0.0
        assert an.acf_derivative_from_cdf(ChipDistribution.uniform(1.0, 1.0), 1.0) == -0.5

    @given(st.sampled_from(KINDS), st.floats(0.05, 1.0), st.floats(0.0, 2.5))
    def test_derivative_integrates_to_acf(self, kind, alpha, tau):
        d = ChipDistribution(kind, 1.0, alpha)
        lo, hi = d.support
        pts = [p for p in (lo, hi) if 0 < p < tau]
        integral, _ = integrate.quad(lambda s: float(an.acf_derivative_from_cdf(d, s)), 0.0, tau, points=pts or None, limit=200)
        assert an.acf_from_cdf(d, tau) == pytest.approx(1.0 + integral, abs=1e-8)

    @given(st.sampled_from(KINDS), st.floats(0.05, 1.0))
    def test_random_chip_acf_shape(self, kind, alpha):
        d = ChipDistribution(kind, 1.0, alpha)
        t = np.linspace(0, 2.2, 221)
        r = an.acf_from_cdf(d, t)
        assert np.all(np.diff(r) <= 1e-12)
        assert np.all(r >= -1e-12)
        assert np.all(r >= an.acf_triangle(1.0, t) - 1e-12)
        assert np.all(np.abs(r[t > 1 + alpha]) < 1e-9)


class TestRandomChipPsd:
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0])
    def test_zero_frequency_limit(self, alpha):
        d = ChipDistribution.uniform(1.0, alpha)
        assert an.psd_randomchip(d, 0.0) == pytest.approx(1 + alpha**2 / 3)
        assert an.psd_randomchip(d, 2e-4) == pytest.approx(1 + alpha**2 / 3, rel=1e-6)

    def test_degenerate_matches_bernoulli(self):
        w = np.linspace(-30, 30, 601)
        np.testing.assert_allclose(an.psd_randomchip(ChipDistribution.degenerate(1.0), w), an.psd_bernoulli(1.0, w), atol=1e-12)

    def test_small_alpha_converges_to_bernoulli(self):
        w = np.linspace(0.1, 30, 300)
        gap = np.max(np.abs(an.psd_randomchip(ChipDistribution.uniform(1.0, 1e-4), w) - an.psd_bernoulli(1.0, w)))
        assert gap < 1e-6

    def test_uniform_closed_form(self):
        w = np.linspace(0.05, 40, 400)
        a = 0.7
        expected = 2 / w**2 * (1 - np.sin(w * a) * np.cos(w) / (w * a))
        np.testing.assert_allclose(an.psd_randomchip(ChipDistribution.uniform(1.0, a), w), expected, rtol=1e-9, atol=1e-14)

    @pytest.mark.parametrize("kind", KINDS)
    @pytest.mark.parametrize("alpha", [0.3, 1.0])
    @pytest.mark.parametrize("omega", [0.0, 0.9, np.pi, 4.4, 11.0])
    def test_fourier_transform_of_acf(self, kind, alpha, omega):
        d = ChipDistribution(kind, 1.0, alpha)
        ref = fourier_oracle(lambda t: float(an.acf_from_cdf(d, t)), omega, 1 + alpha)
        assert an.psd_randomchip(d, omega) == pytest.approx(ref, abs=1e-7)

    def test_raised_cosine_characteristic_near_removable_point(self):
        d = ChipDistribution.raised_cosine(1.0, 1.0)
        w = np.pi + np.array([-2e-3, -1e-3, 0.0, 1e-3, 2e-3])
        psi = an.chip_characteristic(d, w)
        assert np.all(np.isfinite(psi))
        assert psi[2] == pytest.approx(0.5)
        assert np.max(np.abs(np.diff(psi))) < 1e-3

    @pytest.mark.parametrize("kind", KINDS)
    def test_nonnegative_on_dense_grid(self, kind):
        w = np.linspace(-100, 100, 10_000)
        for a in np.linspace(0.05, 1.0, 20):
            assert np.min(an.psd_randomchip(ChipDistribution(kind, 1.0, a), w)) >= 0.0


class TestRelations:
    def test_fig7_ordering(self):
        t = np.linspace(0, 2, 1000)
        lower = an.acf_triangle(1.0, t)
        mid = an.acf_raised_cosine_full(1.0, t)
        upper = an.acf_model(an.ModelParams(1.0, 1.0), t)
        assert np.all(lower <= mid + 1e-15) and np.all(mid <= upper + 1e-15)

    CUSPS = [
        ("telegraph", lambda t: an.acf_telegraph(0.8, t), 0.8),
        ("arcsine gaussian", lambda t: an.acf_hardlimited("gaussian", 0.8, t), 0.8),
        ("arcsine band", lambda t: an.acf_hardlimited("uniform_band", 0.8, t), 0.8),
        ("triangle", lambda t: an.acf_triangle(2.0, t), 0.25),
        ("model", lambda t: an.acf_model(an.ModelParams(2.0, 0.5), t), 0.25),
        ("raised cosine", lambda t: an.acf_raised_cosine_full(2.0, t), 0.25),
        ("product", lambda t: an.acf_product(an.acf_telegraph(0.8, t), an.acf_triangle(2.0, t)), 1.05),
    ]

    @pytest.mark.parametrize("name, acf, n0", CUSPS, ids=[c[0] for c in CUSPS])
    def test_slope_at_origin(self, name, acf, n0):
        assert right_slope(acf) == pytest.approx(-2 * n0, rel=1e-6)

    @pytest.mark.parametrize("name, acf, n0", CUSPS, ids=[c[0] for c in CUSPS])
    def test_tangent_bound(self, name, acf, n0):
        t = np.linspace(-6, 6, 4001)
        assert np.all(acf(t) >= an.tangent_line(n0, t) - 1e-12)
