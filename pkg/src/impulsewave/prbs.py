"""Pseudorandom hardware paths: Fibonacci LFSR clocked by a spread-period clock, and sample-and-hold."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from sympy import factorint

from .core import BinaryWaveform, ChipDistribution, OutOfRangeError, RandomSource, as_generator
from .generators import chip_boundaries, hold_symbols

# Fibonacci tap sets, MSB-first; each verified primitive by polynomial order (see tests).
PRIMITIVE_TAPS: dict[int, tuple[int, ...]] = {
    2: (2, 1),
    3: (3, 2),
    4: (4, 3),
    5: (5, 3),
    6: (6, 5),
    7: (7, 6),
    8: (8, 6, 5, 4),
    9: (9, 5),
    10: (10, 7),
    11: (11, 9),
    12: (12, 6, 4, 1),
    13: (13, 4, 3, 1),
    14: (14, 5, 3, 1),
    15: (15, 14),
    16: (16, 15, 13, 4),
    17: (17, 14),
    18: (18, 11),
    19: (19, 6, 2, 1),
    20: (20, 17),
    21: (21, 19),
    22: (22, 21),
    23: (23, 18),
    24: (24, 23, 22, 17),
}

CLOCK_MODES = ("cyclic_fixed", "permute_per_cycle")


class CorrelatedSamplesWarning(UserWarning):
    """Consecutive sample-and-hold samples are too correlated for the Bernoulli model."""


@dataclass(frozen=True)
class LfsrConfig:
    width: int
    taps: tuple[int, ...]
    initial_state: int = 1

    def __post_init__(self) -> None:
        m = self.width
        if not 2 <= m <= 64:
            raise ValueError(f"width must be in [2, 64], got {m}")
        taps = tuple(sorted({int(p) for p in self.taps}, reverse=True))
        if not taps or taps[0] != m or taps[-1] < 1:
            raise ValueError(f"taps must lie in [1, {m}] and include {m}, got {self.taps}")
        object.__setattr__(self, "taps", taps)
        if not 0 < self.initial_state < 2**m:
            raise ValueError("initial_state must be a nonzero m-bit word")

    @classmethod
    def default(cls, width: int = 16, initial_state: int = 1) -> "LfsrConfig":
        return cls(width, PRIMITIVE_TAPS[width], initial_state)

    @property
    def period(self) -> int:
        return 2**self.width - 1


def lfsr_step(state: int, cfg: LfsrConfig) -> tuple[int, int]:
    """One shift: returns ``(next_state, symbol)`` with output bit 0 -> +1, 1 -> -1."""
    if state == 0:
        raise ValueError("LFSR state must be nonzero")
    m = cfg.width
    fb = 0
    for p in cfg.taps:
        fb ^= state >> (m - p)
    fb &= 1
    return (state >> 1) | (fb << (m - 1)), 1 - 2 * (state & 1)


def lfsr_bits(cfg: LfsrConfig, n: int) -> np.ndarray:
    """First ``n`` output bits (0/1) via the recurrence ``o[j] = XOR_p o[j - p]``."""
    m = cfg.width
    out = np.empty(max(n, m), dtype=np.uint8)
    out[:m] = [(cfg.initial_state >> i) & 1 for i in range(m)]
    b = cfg.taps[-1]
    j = m
    while j < n:
        k = min(b, n - j)
        acc = np.zeros(k, dtype=np.uint8)
        for p in cfg.taps:
            acc ^= out[j - p : j - p + k]
        out[j : j + k] = acc
        j += k
    return out[:n]


def lfsr_symbols(cfg: LfsrConfig, n: int) -> np.ndarray:
    return (1 - 2 * lfsr_bits(cfg, n).astype(np.int8)).astype(np.int8)


def _gf2_mulmod(a: int, b: int, poly: int, deg: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> deg) & 1:
            a ^= poly
    return r


def _gf2_powmod_x(e: int, poly: int, deg: int) -> int:
    result, base = 1, 2
    while e:
        if e & 1:
            result = _gf2_mulmod(result, base, poly, deg)
        base = _gf2_mulmod(base, base, poly, deg)
        e >>= 1
    return result


def is_primitive(width: int, taps: Sequence[int]) -> bool:
    """True when the register's characteristic polynomial has order ``2**width - 1``."""
    poly = 1 << width
    for p in taps:
        poly |= 1 << (width - p)
    if not poly & 1:
        return False
    order = 2**width - 1
    if _gf2_powmod_x(order, poly, width) != 1:
        return False
    return all(_gf2_powmod_x(order // q, poly, width) != 1 for q in factorint(order))


@dataclass(frozen=True)
class SpreadClockConfig:
    """Clock whose interpulse gaps are taken from a fixed multiset, one permutation per cycle."""

    intervals: tuple[float, ...]
    mode: str = "permute_per_cycle"
    seed: int = 0
    stream_id: int = 1

    def __post_init__(self) -> None:
        iv = tuple(float(x) for x in self.intervals)
        if not iv:
            raise ValueError("at least one interval is required")
        if min(iv) <= 0 or not all(math.isfinite(x) for x in iv):
            raise ValueError("intervals must be positive and finite")
        if self.mode not in CLOCK_MODES:
            raise ValueError(f"mode must be one of {CLOCK_MODES}, got {self.mode!r}")
        object.__setattr__(self, "intervals", iv)

    @classmethod
    def uniform(
        cls, t_c: float = 1.0, alpha: float = 0.5, k: int = 64, mode: str = "permute_per_cycle", seed: int = 0
    ) -> "SpreadClockConfig":
        """``k`` equally spaced gaps spanning ``[(1-alpha) t_c, (1+alpha) t_c]`` inclusive."""
        if not 0.0 <= alpha < 1.0:
            raise ValueError("alpha must lie in [0, 1): alpha = 1 puts a zero-length gap in the set")
        if k < 1 or (k == 1 and alpha != 0):
            raise ValueError("k must be >= 1, and > 1 when alpha > 0")
        iv = np.full(1, t_c) if k == 1 else np.linspace((1 - alpha) * t_c, (1 + alpha) * t_c, k)
        return cls(tuple(iv), mode, seed)

    @property
    def k(self) -> int:
        return len(self.intervals)

    @property
    def t_c(self) -> float:
        return math.fsum(self.intervals) / self.k

    @property
    def cycle_length(self) -> float:
        return math.fsum(self.intervals)

    def rng(self) -> RandomSource:
        return RandomSource(self.seed, self.stream_id)


def clock_gaps(cfg: SpreadClockConfig, n: int) -> np.ndarray:
    g = cfg.rng().generator
    iv = np.asarray(cfg.intervals)
    cycles = -(-n // cfg.k)
    if cfg.mode == "cyclic_fixed":
        gaps = np.tile(g.permutation(iv), cycles)
    else:
        gaps = g.permuted(np.tile(iv, (cycles, 1)), axis=1).reshape(-1)
    return gaps[:n]


def clock_ticks(cfg: SpreadClockConfig, n: int) -> np.ndarray:
    """First ``n`` tick times (the clock starts at 0, the first tick comes one gap later)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.cumsum(clock_gaps(cfg, n))


def _ticks_until(cfg: SpreadClockConfig, duration: float) -> np.ndarray:
    cycles = int(math.ceil(duration / cfg.cycle_length)) + 1
    ticks = clock_ticks(cfg, cycles * cfg.k)
    return ticks[ticks <= duration]


def gen_prbs_waveform(
    lfsr: LfsrConfig,
    clk: SpreadClockConfig,
    duration: float | None = None,
    *,
    n_chips: int | None = None,
) -> BinaryWaveform:
    """LFSR symbols held between spread-clock ticks; give either ``duration`` or ``n_chips``."""
    if (duration is None) == (n_chips is None):
        raise ValueError("give exactly one of duration or n_chips")
    if n_chips is not None:
        if n_chips < 1:
            raise ValueError("n_chips must be >= 1")
        ends = clock_ticks(clk, n_chips)
    else:
        if not duration > 0:
            raise ValueError("duration must be positive")
        ends = _ticks_until(clk, duration)
    return hold_symbols(lfsr_symbols(lfsr, ends.size), ends)


def random_ticks(d: ChipDistribution, duration: float, rng: RandomSource | np.random.Generator) -> np.ndarray:
    """Tick times of a randomly period-modulated clock (gaps i.i.d. from ``d``)."""
    return chip_boundaries(d, duration, as_generator(rng))


def gen_sampled_hold(
    source: BinaryWaveform,
    clk: SpreadClockConfig | Sequence[float] | np.ndarray,
    *,
    max_source_acf: float = 0.1,
) -> BinaryWaveform:
    """Sample ``source`` at 0 and at each tick, holding each sample until the next tick.

    ``clk`` is a spread-clock config (ticks generated up to the source duration) or explicit
    tick times.  Warns when the source is still correlated across the shortest gap.
    """
    from .analysis import acf_exact

    if isinstance(clk, SpreadClockConfig):
        ticks = _ticks_until(clk, source.duration)
    else:
        ticks = np.asarray(clk, dtype=float)
        if ticks.size and ticks[-1] > source.duration:
            raise OutOfRangeError(f"tick {ticks[-1]} beyond source duration {source.duration}")
    if ticks.size == 0:
        raise OutOfRangeError("no clock tick inside the source duration")
    if ticks[0] <= 0 or np.any(np.diff(ticks) <= 0):
        raise ValueError("ticks must be positive and strictly increasing")
    starts = np.concatenate(([0.0], ticks[:-1]))
    min_gap = float(np.min(np.diff(np.concatenate(([0.0], ticks)))))
    if min_gap < source.duration / 2:
        r = float(acf_exact(source, [min_gap]).values[0])
        if r > max_source_acf:
            warnings.warn(
                f"source autocorrelation {r:.3f} at the shortest tick gap {min_gap:.4g} exceeds "
                f"{max_source_acf}; held samples are not independent",
                CorrelatedSamplesWarning,
                stacklevel=2,
            )
    return hold_symbols(source.values_at(starts), ticks)


# --- key/value config file ------------------------------------------------------

CONFIG_KEYS = (
    "lfsr.width",
    "lfsr.taps",
    "lfsr.seed_state",
    "clock.t_c",
    "clock.alpha",
    "clock.k",
    "clock.mode",
    "clock.seed",
)


def parse_kv(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        out[key] = value
    return out


def prbs_configs(values: dict[str, str]) -> tuple[LfsrConfig, SpreadClockConfig]:
    """Build both configs from config-file keys; missing keys take the shipped defaults."""
    width = int(values.get("lfsr.width", 20))
    taps_text = values.get("lfsr.taps")
    taps = tuple(int(x) for x in taps_text.split(",")) if taps_text else PRIMITIVE_TAPS[width]
    lfsr = LfsrConfig(width, taps, int(values.get("lfsr.seed_state", "1"), 0))
    clk = SpreadClockConfig.uniform(
        float(values.get("clock.t_c", 1.0)),
        float(values.get("clock.alpha", 0.5)),
        int(values.get("clock.k", 64)),
        values.get("clock.mode", "permute_per_cycle"),
        int(values.get("clock.seed", 0)),
    )
    return lfsr, clk


def load_prbs_config(path: str | Path) -> tuple[LfsrConfig, SpreadClockConfig]:
    return prbs_configs(parse_kv(Path(path).read_text(encoding="utf-8")))


def dump_prbs_config(lfsr: LfsrConfig, t_c: float, alpha: float, k: int, mode: str, seed: int) -> str:
    lines = [
        f"lfsr.width = {lfsr.width}",
        f"lfsr.taps = {','.join(map(str, lfsr.taps))}",
        f"lfsr.seed_state = {lfsr.initial_state:#x}",
        f"clock.t_c = {t_c!r}",
        f"clock.alpha = {alpha!r}",
        f"clock.k = {k}",
        f"clock.mode = {mode}",
        f"clock.seed = {seed}",
    ]
    return "\n".join(lines) + "\n"
