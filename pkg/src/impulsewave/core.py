"""Event-based binary waveforms, chip-period laws and seeded random streams."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

FILE_MAGIC = "impulsewave-v1"

KINDS = ("degenerate", "uniform", "raised_cosine")


class OutOfRangeError(ValueError):
    """A time or lag falls outside the waveform it refers to."""


@dataclass(frozen=True, eq=False)
class BinaryWaveform:
    """A +/-1 waveform stored as its initial level and sign-change times.

    The level on ``[t_k, t_{k+1})`` is ``initial_level * (-1)**k`` (right-continuous).
    """

    initial_level: int
    transitions: np.ndarray
    duration: float

    def __post_init__(self) -> None:
        if self.initial_level not in (1, -1):
            raise ValueError(f"initial_level must be +1 or -1, got {self.initial_level!r}")
        t = np.ascontiguousarray(self.transitions, dtype=float).reshape(-1)
        duration = float(self.duration)
        if not (duration > 0 and math.isfinite(duration)):
            raise ValueError(f"duration must be positive and finite, got {duration}")
        if t.size:
            if not np.all(np.diff(t) > 0):
                raise ValueError("transitions must be strictly increasing")
            if t[0] <= 0 or t[-1] >= duration:
                raise ValueError("transitions must lie inside (0, duration)")
        t.setflags(write=False)
        object.__setattr__(self, "transitions", t)
        object.__setattr__(self, "duration", duration)
        object.__setattr__(self, "initial_level", int(self.initial_level))

    @classmethod
    def constant(cls, level: int, duration: float) -> "BinaryWaveform":
        return cls(level, np.empty(0), duration)

    @property
    def n_transitions(self) -> int:
        return int(self.transitions.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryWaveform):
            return NotImplemented
        return (
            self.initial_level == other.initial_level
            and self.duration == other.duration
            and np.array_equal(self.transitions, other.transitions)
        )

    def __repr__(self) -> str:
        return (
            f"BinaryWaveform(initial_level={self.initial_level}, "
            f"n_transitions={self.n_transitions}, duration={self.duration!r})"
        )

    def values_at(self, t) -> np.ndarray:
        """Vectorized level lookup; no range check (see :func:`waveform_value_at`)."""
        flips = np.searchsorted(self.transitions, t, side="right")
        return np.where(flips % 2 == 0, self.initial_level, -self.initial_level).astype(np.int8)

    def levels(self) -> np.ndarray:
        """Level on each of the ``n_transitions + 1`` constant pieces."""
        k = np.arange(self.n_transitions + 1)
        return np.where(k % 2 == 0, self.initial_level, -self.initial_level).astype(np.int8)

    def final_level(self) -> int:
        return self.initial_level if self.n_transitions % 2 == 0 else -self.initial_level

    def crop(self, duration: float) -> "BinaryWaveform":
        """Restriction to ``[0, duration]``."""
        if not 0 < duration <= self.duration:
            raise OutOfRangeError(f"cannot crop a {self.duration} waveform to {duration}")
        keep = self.transitions[self.transitions < duration]
        return BinaryWaveform(self.initial_level, keep, duration)

    def sample(self, step: float, offset: float = 0.0) -> np.ndarray:
        """Point samples at ``offset + j*step`` for every instant inside ``[0, duration)``."""
        n = int(math.floor((self.duration - offset) / step))
        return self.values_at(offset + step * np.arange(n))


def waveform_value_at(w: BinaryWaveform, t: float) -> int:
    """Level of ``w`` at time ``t``; exactly at a transition the post-flip level is returned."""
    if not (0.0 <= t <= w.duration):
        raise OutOfRangeError(f"t={t} outside [0, {w.duration}]")
    flips = int(np.searchsorted(w.transitions, t, side="right"))
    return w.initial_level if flips % 2 == 0 else -w.initial_level


def _raised_cosine_centered_cdf(x: np.ndarray, half_width: float) -> np.ndarray:
    inner = np.clip(x, -half_width, half_width)
    val = 0.5 + inner / (2 * half_width) + np.sin(np.pi * inner / half_width) / (2 * np.pi)
    val = np.clip(val, 0.0, 1.0)
    return np.where(x <= -half_width, 0.0, np.where(x >= half_width, 1.0, val))


@dataclass(frozen=True)
class ChipDistribution:
    """Law of the chip period ``C = t_c + X`` with ``X`` even on ``[-alpha*t_c, alpha*t_c]``.

    ``alpha == 0`` collapses every kind onto the degenerate law ``C == t_c``.
    """

    kind: str
    t_c: float = 1.0
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not (self.t_c > 0 and math.isfinite(self.t_c)):
            raise ValueError(f"t_c must be positive, got {self.t_c}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.kind == "degenerate" and self.alpha != 0:
            raise ValueError("degenerate kind requires alpha == 0")

    @classmethod
    def degenerate(cls, t_c: float = 1.0) -> "ChipDistribution":
        return cls("degenerate", t_c, 0.0)

    @classmethod
    def uniform(cls, t_c: float = 1.0, alpha: float = 0.5) -> "ChipDistribution":
        return cls("uniform", t_c, alpha)

    @classmethod
    def raised_cosine(cls, t_c: float = 1.0, alpha: float = 1.0) -> "ChipDistribution":
        return cls("raised_cosine", t_c, alpha)

    @property
    def is_degenerate(self) -> bool:
        return self.alpha == 0.0

    @property
    def half_width(self) -> float:
        return self.alpha * self.t_c

    @property
    def support(self) -> tuple[float, float]:
        return ((1 - self.alpha) * self.t_c, (1 + self.alpha) * self.t_c)

    @property
    def variance(self) -> float:
        a = self.half_width
        if self.is_degenerate:
            return 0.0
        if self.kind == "uniform":
            return a * a / 3
        return a * a * (1 / 3 - 2 / np.pi**2)

    def pdf(self, tau):
        """Density of the (shifted) chip period; zero outside the support."""
        tau = np.asarray(tau, dtype=float)
        if self.is_degenerate:
            raise ValueError("degenerate chip law has no density")
        x = tau - self.t_c
        a = self.half_width
        inside = np.abs(x) <= a
        if self.kind == "uniform":
            p = np.full_like(x, 1 / (2 * a))
        else:
            p = (1 + np.cos(np.pi * x / a)) / (2 * a)
        return np.where(inside, p, 0.0)

    def cdf(self, tau):
        tau = np.asarray(tau, dtype=float)
        if self.is_degenerate:
            return np.where(tau >= self.t_c, 1.0, 0.0)
        x = tau - self.t_c
        a = self.half_width
        if self.kind == "uniform":
            return np.clip((x + a) / (2 * a), 0.0, 1.0)
        return _raised_cosine_centered_cdf(x, a)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.is_degenerate:
            return np.full(size, self.t_c)
        if self.kind == "uniform":
            return self.t_c + self.half_width * rng.uniform(-1.0, 1.0, size)
        return self.t_c + _raised_cosine_inverse(rng.random(size), self.half_width, self.t_c)


def _raised_cosine_inverse(u: np.ndarray, half_width: float, t_c: float) -> np.ndarray:
    # bisection on the monotone centered cdf
    lo = np.full_like(u, -half_width)
    hi = np.full_like(u, half_width)
    tol = 1e-12 * t_c
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        below = _raised_cosine_centered_cdf(mid, half_width) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


@dataclass
class RandomSource:
    """Seeded generator; each ``stream_id`` is an independent PCG64 sub-stream."""

    seed: int
    stream_id: int = 0
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def substream(self, stream_id: int) -> "RandomSource":
        return RandomSource(self.seed, stream_id)


def as_generator(rng: RandomSource | np.random.Generator | int) -> np.random.Generator:
    if isinstance(rng, RandomSource):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    return RandomSource(int(rng)).generator


def sample_chip(d: ChipDistribution, rng: RandomSource | np.random.Generator, size: int | None = None):
    """Draw chip durations; a scalar when ``size`` is None."""
    draws = d.sample(as_generator(rng), 1 if size is None else size)
    return float(draws[0]) if size is None else draws


def chip_cdf(d: ChipDistribution, tau):
    out = d.cdf(tau)
    return float(out) if np.ndim(out) == 0 else out


# --- waveform file format -------------------------------------------------


def dumps_waveform(w: BinaryWaveform, comments: Iterable[str] = ()) -> str:
    """Text form: ``#`` comment lines, the header line, then one transition time per line."""
    lines = [f"# {c}" for c in comments]
    lines.append(f"{FILE_MAGIC} {w.initial_level:+d} {w.duration:.17g}")
    lines.extend(f"{t:.17g}" for t in w.transitions)
    return "\n".join(lines) + "\n"


def write_waveform(w: BinaryWaveform, path: str | Path, comments: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_waveform(w, comments))


def read_waveform(path: str | Path) -> BinaryWaveform:
    header = None
    times: list[float] = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split()
                if len(header) != 3 or header[0] != FILE_MAGIC:
                    raise ValueError(f"{path}: not an {FILE_MAGIC} file")
                continue
            times.append(float(line))
    if header is None:
        raise ValueError(f"{path}: missing header")
    return BinaryWaveform(int(header[1]), np.array(times), float(header[2]))
