import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from impulsewave import analytic as an
from impulsewave.analysis import PrecisionWarning, acf_exact, acf_oracle_dense, crossing_rate
from impulsewave.core import BinaryWaveform, ChipDistribution, RandomSource, waveform_value_at
from impulsewave.generators import (
    GaussianSpec,
    InsufficientLengthError,
    _sign_changes,
    gen_bernoulli,
    gen_hardlimited_gaussian,
    gen_product,
    gen_telegraph,
)


def time_average(w: BinaryWaveform) -> float:
    edges = np.concatenate(([0.0], w.transitions, [w.duration]))
    return float(np.dot(w.levels(), np.diff(edges)) / w.duration)


@pytest.fixture(scope="module")
def telegraph():
    return gen_telegraph(1.0, 2e5, RandomSource(11))


@pytest.fixture(scope="module")
def gaussian():
    return gen_hardlimited_gaussian(GaussianSpec("gaussian", 1.0), 1e5, RandomSource(12))


@pytest.fixture(scope="module")
def band():
    return gen_hardlimited_gaussian(GaussianSpec("uniform_band", 1.0), 1e5, RandomSource(13))


@pytest.fixture(scope="module")
def bernoulli():
    return gen_bernoulli(ChipDistribution.degenerate(1.0), 2e5, RandomSource(14))


@pytest.fixture(scope="module")
def random_chip():
    return gen_bernoulli(ChipDistribution.uniform(1.0, 0.5), 2e5, RandomSource(15))


class TestTelegraph:
    def test_rate(self):
        w = gen_telegraph(1.0, 1e6, RandomSource(1))
        assert crossing_rate(w) == pytest.approx(1.0, abs=0.01)

    def test_acf(self, telegraph):
        lags = np.linspace(0, 3, 31)
        est = acf_exact(telegraph, lags).values
        assert est[0] == 1.0
        assert est[5] == pytest.approx(np.exp(-1), abs=0.01)
        assert np.max(np.abs(est - an.acf_telegraph(1.0, lags))) < 0.01

    def test_gaps_exponential(self, telegraph):
        gaps = np.diff(telegraph.transitions)
        assert gaps.mean() == pytest.approx(1.0, rel=0.01)
        assert gaps.std() == pytest.approx(1.0, rel=0.02)

    def test_initial_level_equiprobable(self):
        levels = [gen_telegraph(1.0, 1.0, RandomSource(s)).initial_level for s in range(400)]
        assert abs(np.mean(levels)) < 0.15

    @pytest.mark.parametrize("n0, duration", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
    def test_invalid(self, n0, duration):
        with pytest.raises(ValueError):
            gen_telegraph(n0, duration, RandomSource(0))


class TestHardLimitedGaussian:
    def test_arcsine_law(self, gaussian):
        lags = np.linspace(0, 2, 41)
        est = acf_exact(gaussian, lags).values
        assert est[0] == 1.0
        assert np.max(np.abs(est - an.acf_hardlimited("gaussian", 1.0, lags))) < 0.02

    def test_band_rate(self, band):
        assert crossing_rate(band) == pytest.approx(1.0, abs=0.02)

    def test_band_acf_is_arcsine_of_sinc(self, band):
        lags = np.linspace(0, 2, 41)
        est = acf_exact(band, lags).values
        assert np.max(np.abs(est - an.acf_hardlimited("uniform_band", 1.0, lags))) < 0.02

    def test_gaussian_rate(self, gaussian):
        assert crossing_rate(gaussian) == pytest.approx(1.0, abs=0.02)

    def test_insufficient_length(self):
        with pytest.raises(InsufficientLengthError):
            gen_hardlimited_gaussian(GaussianSpec(n0=2.0), 4.9, RandomSource(0))

    def test_replay(self):
        spec = GaussianSpec(n0=3.0)
        assert gen_hardlimited_gaussian(spec, 50.0, RandomSource(4)) == gen_hardlimited_gaussian(spec, 50.0, RandomSource(4))

    @pytest.mark.parametrize("kw", [{"spectrum_kind": "pink"}, {"n0": 0.0}, {"oversample_factor": 8}, {"oversample_factor": 20.5}])
    def test_invalid_spec(self, kw):
        with pytest.raises(ValueError):
            GaussianSpec(**kw)

    def test_band_edge(self):
        spec = GaussianSpec("uniform_band", 2.0)
        assert spec.bandwidth == pytest.approx(np.sqrt(3) * np.pi * 2.0)


class TestSignChanges:
    def test_sine(self):
        step = 1e-3
        t = step * np.arange(10_001)
        level, times = _sign_changes(np.sin(2 * np.pi * t + 0.1), step)
        assert level == 1
        expected = (np.arange(1, 21) * np.pi - 0.1) / (2 * np.pi)
        np.testing.assert_allclose(times, expected, atol=1e-7)

    def test_exact_zero_sample(self):
        level, times = _sign_changes(np.array([1.0, 0.0, -1.0]), 1.0)
        assert level == 1 and times.size == 1 and 1.0 <= times[0] < 2.0

    def test_tied_crossings_cancel(self):
        # 0 -> perturbed to +tiny; neighbours negative give two crossings at one instant
        level, times = _sign_changes(np.array([-1.0, 0.0, -1.0]), 1.0)
        assert level == -1
        assert times.size in (0, 2)
        assert np.all(np.diff(times) > 0)


class TestBernoulli:
    def test_triangle(self, bernoulli):
        lags = np.linspace(0, 2, 21)
        est = acf_exact(bernoulli, lags).values
        assert est[5] == pytest.approx(0.5, abs=0.01)
        assert np.max(np.abs(est[lags >= 1])) < 0.01
        assert np.max(np.abs(est - an.acf_triangle(1.0, lags))) < 0.01

    def test_rate_is_half_chip_rate(self, bernoulli):
        assert crossing_rate(bernoulli) == pytest.approx(0.5, abs=0.01)

    def test_degenerate_transitions_on_integer_grid(self, bernoulli):
        t = bernoulli.transitions
        np.testing.assert_array_equal(t, np.round(t))
        assert bernoulli.duration == 2e5

    def test_trimmed_to_last_complete_chip(self):
        w = gen_bernoulli(ChipDistribution.degenerate(0.75), 10.0, RandomSource(0))
        assert w.duration == pytest.approx(9.75)
        w = gen_bernoulli(ChipDistribution.uniform(1.0, 0.5), 100.0, RandomSource(0))
        assert 98.5 <= w.duration <= 100.0

    def test_uniform_alpha_one_middle_branch(self):
        w = gen_bernoulli(ChipDistribution.uniform(1.0, 1.0), 4e5, RandomSource(16))
        exact = acf_exact(w, [1.0]).values[0]
        assert exact == pytest.approx(0.25, abs=0.01)
        # coarse independent estimate; alpha = 1 produces arbitrarily short chips
        with pytest.warns(PrecisionWarning):
            dense = acf_oracle_dense(w.crop(2e4), [1.0], 1e-3).values[0]
        assert dense == pytest.approx(0.25, abs=0.03)

    def test_random_chip_acf_monotone_and_compact(self, random_chip):
        lags = np.linspace(0, 3, 61)
        est = acf_exact(random_chip, lags).values
        assert np.all(np.diff(est) <= 0.01)
        assert np.max(np.abs(est[lags > 1.5])) < 0.01
        assert np.max(np.abs(est - an.acf_model(an.ModelParams(1.0, 0.5), lags))) < 0.01

    def test_signs_independent_per_chip(self):
        # half the chip boundaries carry a flip
        d = ChipDistribution.degenerate(1.0)
        w = gen_bernoulli(d, 1e5, RandomSource(3))
        assert w.n_transitions / 1e5 == pytest.approx(0.5, abs=0.006)


class TestProduct:
    def test_identity(self, telegraph):
        assert gen_product(telegraph, BinaryWaveform.constant(1, telegraph.duration)) == telegraph

    def test_demodulation(self, telegraph, random_chip):
        a = telegraph.crop(random_chip.duration)
        assert gen_product(gen_product(a, random_chip), random_chip) == a

    def test_rate_adds(self):
        z = gen_product(gen_telegraph(1.0, 1e5, RandomSource(21)), gen_telegraph(2.0, 1e5, RandomSource(22)))
        assert crossing_rate(z) == pytest.approx(3.0, abs=0.05)

    def test_acf_factorizes(self, telegraph, random_chip):
        a = telegraph.crop(random_chip.duration)
        z = gen_product(a, random_chip)
        lags = np.linspace(0, 2, 21)
        prod = acf_exact(a, lags).values * acf_exact(random_chip, lags).values
        assert np.max(np.abs(acf_exact(z, lags).values - prod)) < 0.02

    def test_duration_mismatch(self):
        with pytest.raises(ValueError):
            gen_product(BinaryWaveform.constant(1, 1.0), BinaryWaveform.constant(1, 2.0))

    def test_coincident_transitions_cancel(self):
        a = BinaryWaveform(1, [1.0, 2.0], 3.0)
        b = BinaryWaveform(-1, [1.0, 2.5], 3.0)
        assert gen_product(a, b) == BinaryWaveform(-1, [2.0, 2.5], 3.0)

    @given(st.integers(0, 2**32), st.integers(0, 2**32), st.floats(0, 1))
    def test_pointwise_product(self, s1, s2, frac):
        a = gen_telegraph(2.0, 20.0, RandomSource(s1))
        b = gen_bernoulli(ChipDistribution.degenerate(0.5), 20.0, RandomSource(s2))
        z = gen_product(a, b)
        assert z == gen_product(b, a)
        t = frac * 20.0
        assert waveform_value_at(z, t) == waveform_value_at(a, t) * waveform_value_at(b, t)


ALL_KINDS = ["telegraph", "gaussian", "band", "bernoulli", "random_chip"]


@pytest.mark.parametrize("name", ALL_KINDS)
def test_zero_mean(name, request):
    w = request.getfixturevalue(name)
    assert abs(time_average(w)) < 3 / np.sqrt(crossing_rate(w) * w.duration)


@pytest.mark.parametrize("name", ALL_KINDS)
def test_tangent_bound(name, request):
    w = request.getfixturevalue(name)
    lags = np.linspace(0, 4, 81)
    est = acf_exact(w, lags).values
    assert np.all(est >= an.tangent_line(crossing_rate(w), lags) - 0.02)
