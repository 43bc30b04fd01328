"""Realizations of the binary processes: telegraph, hard-limited Gaussian, Bernoulli, products."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BinaryWaveform, ChipDistribution, RandomSource, as_generator

SPECTRUM_KINDS = ("uniform_band", "gaussian")


class InsufficientLengthError(ValueError):
    pass


@dataclass(frozen=True)
class GaussianSpec:
    """Underlying Gaussian process whose hard-limited version crosses zero ``n0`` times per second."""

    spectrum_kind: str = "gaussian"
    n0: float = 1.0
    oversample_factor: int = 32

    def __post_init__(self) -> None:
        if self.spectrum_kind not in SPECTRUM_KINDS:
            raise ValueError(f"spectrum_kind must be one of {SPECTRUM_KINDS}")
        if not self.n0 > 0:
            raise ValueError("n0 must be positive")
        if int(self.oversample_factor) != self.oversample_factor or self.oversample_factor < 16:
            raise ValueError("oversample_factor must be an integer >= 16")

    @property
    def bandwidth(self) -> float:
        """Band edge ``W`` (rad/s) of the uniform-band spectrum."""
        return math.sqrt(3.0) * math.pi * self.n0

    @property
    def step(self) -> float:
        return 1.0 / (self.oversample_factor * self.n0)

    def spectrum(self, omega: np.ndarray) -> np.ndarray:
        """Unnormalized spectral density of ``X``; only its shape matters after hard limiting."""
        if self.spectrum_kind == "uniform_band":
            return (np.abs(omega) < self.bandwidth).astype(float)
        # Fourier pair of exp(-pi^2 n0^2 tau^2 / 2)
        return np.exp(-(omega**2) / (2 * (math.pi * self.n0) ** 2))


def _check_positive(**kw: float) -> None:
    for name, value in kw.items():
        if not (value > 0 and math.isfinite(value)):
            raise ValueError(f"{name} must be positive and finite, got {value}")


def gen_telegraph(n0: float, duration: float, rng: RandomSource | np.random.Generator) -> BinaryWaveform:
    """Random telegraph signal: exponential gaps with mean ``1/n0``."""
    _check_positive(n0=n0, duration=duration)
    g = as_generator(rng)
    level = 1 if g.random() < 0.5 else -1
    chunks = []
    t = 0.0
    block = int(n0 * duration + 6 * math.sqrt(n0 * duration) + 16)
    while t < duration:
        times = t + np.cumsum(g.exponential(1.0 / n0, block))
        chunks.append(times)
        t = float(times[-1])
    times = np.concatenate(chunks)
    return BinaryWaveform(level, times[times < duration], duration)


def _sign_changes(x: np.ndarray, step: float) -> tuple[int, np.ndarray]:
    x = np.where(x == 0.0, np.nextafter(0.0, 1.0), x)
    pos = x > 0
    idx = np.flatnonzero(pos[1:] != pos[:-1])
    frac = x[idx] / (x[idx] - x[idx + 1])
    times = (idx + frac) * step
    # floating-point ties between neighbouring crossings: two flips at one instant cancel
    dup = np.flatnonzero(np.diff(times) <= 0)
    if dup.size:
        drop = np.zeros(times.size, dtype=bool)
        for i in dup:
            if not drop[i]:
                drop[i] = drop[i + 1] = True
        times = times[~drop]
    return (1 if pos[0] else -1), times


def gaussian_path(spec: GaussianSpec, n: int, rng: RandomSource | np.random.Generator) -> np.ndarray:
    """Stationary Gaussian samples on a grid of ``n`` points by circulant spectral filtering."""
    g = as_generator(rng)
    white = g.standard_normal(n)
    omega = 2 * np.pi * np.fft.rfftfreq(n, d=spec.step)
    return np.fft.irfft(np.fft.rfft(white) * np.sqrt(spec.spectrum(omega)), n)


def gen_hardlimited_gaussian(
    spec: GaussianSpec, duration: float, rng: RandomSource | np.random.Generator
) -> BinaryWaveform:
    """``sgn`` of a synthesized Gaussian path, crossings located by linear interpolation."""
    _check_positive(duration=duration)
    if duration < 10.0 / spec.n0:
        raise InsufficientLengthError(f"duration {duration} is shorter than 10 correlation lengths")
    n = int(math.ceil(duration / spec.step)) + 1
    x = gaussian_path(spec, n, rng)
    level, times = _sign_changes(x, spec.step)
    times = times[(times > 0) & (times < duration)]
    return BinaryWaveform(level, times, duration)


def chip_boundaries(d: ChipDistribution, duration: float, g: np.random.Generator) -> np.ndarray:
    """Ends of consecutive chips, keeping only chips that finish by ``duration``."""
    if d.is_degenerate:
        n = int(math.floor(duration / d.t_c + 1e-12))
        return d.t_c * np.arange(1, n + 1)
    block = int(duration / d.t_c * 1.05 + 64)
    chunks = []
    t = 0.0
    while t < duration:
        ends = t + np.cumsum(d.sample(g, block))
        chunks.append(ends)
        t = float(ends[-1])
    ends = np.concatenate(chunks)
    ends = ends[ends <= duration]
    # a zero-length chip (alpha == 1 draws the support edge) carries no interval
    return ends[np.diff(ends, prepend=0.0) > 0]


def hold_symbols(symbols: np.ndarray, ends: np.ndarray) -> BinaryWaveform:
    """Chip ``k`` spans ``[ends[k-1], ends[k])`` (chip 0 starts at 0) and carries ``symbols[k]``."""
    if ends.size == 0:
        raise InsufficientLengthError("no complete chip fits in the requested duration")
    symbols = np.asarray(symbols)
    flips = np.flatnonzero(symbols[1:] != symbols[:-1])
    return BinaryWaveform(int(symbols[0]), ends[flips], float(ends[-1]))


def gen_bernoulli(
    d: ChipDistribution, duration: float, rng: RandomSource | np.random.Generator
) -> BinaryWaveform:
    """Bernoulli waveform with i.i.d. equiprobable chip signs and chip lengths drawn from ``d``.

    The returned duration is trimmed to the end of the last complete chip.
    """
    _check_positive(duration=duration)
    g = as_generator(rng)
    ends = chip_boundaries(d, duration, g)
    signs = np.where(g.random(ends.size) < 0.5, 1, -1).astype(np.int8)
    return hold_symbols(signs, ends)


def gen_product(w1: BinaryWaveform, w2: BinaryWaveform) -> BinaryWaveform:
    """Pointwise product; coincident transitions cancel exactly."""
    if w1.duration != w2.duration:
        raise ValueError(f"durations differ: {w1.duration} vs {w2.duration} (crop first)")
    times = np.setxor1d(w1.transitions, w2.transitions, assume_unique=True)
    return BinaryWaveform(w1.initial_level * w2.initial_level, times, w1.duration)
