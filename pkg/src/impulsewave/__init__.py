"""Random binary waveforms with impulse-like autocorrelation, and estimators that check them."""

from .analysis import (
    AcfCurve,
    Interferogram,
    PsdCurve,
    acf_exact,
    acf_oracle_dense,
    crossing_rate,
    interferogram,
    psd_estimate,
    xcorr_exact,
)
from .core import BinaryWaveform, ChipDistribution, RandomSource, chip_cdf, sample_chip, waveform_value_at
from .generators import GaussianSpec, gen_bernoulli, gen_hardlimited_gaussian, gen_product, gen_telegraph
from .prbs import LfsrConfig, SpreadClockConfig, clock_ticks, gen_prbs_waveform, gen_sampled_hold, lfsr_step

__version__ = "0.1.0"
