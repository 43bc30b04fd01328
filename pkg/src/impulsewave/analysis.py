"""Estimators on event-based waveforms: exact correlation, dense-grid oracle, PSD, crossing statistics."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import signal

from .core import BinaryWaveform, OutOfRangeError

CSV_FMT = "%.15g"


class PrecisionWarning(UserWarning):
    pass


class EmptyEstimateError(ValueError):
    pass


class InsufficientDataError(ValueError):
    pass


def write_csv(path: str | Path, columns: dict[str, np.ndarray], comments: Iterable[str] = ()) -> None:
    names = list(columns)
    data = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write(",".join(names) + "\n")
        np.savetxt(fh, data, fmt=CSV_FMT, delimiter=",")


def read_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Inverse of :func:`write_csv`; comment lines are skipped."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError(f"{path}: no header row")
    names = lines[0].strip().split(",")
    body = np.loadtxt(lines[1:], delimiter=",", ndmin=2) if len(lines) > 1 else np.empty((0, len(names)))
    return {n: body[:, i] for i, n in enumerate(names)}


@dataclass
class AcfCurve:
    lags: np.ndarray
    values: np.ndarray
    effective_duration: float

    def to_csv(self, path: str | Path, comments: Iterable[str] = ()) -> None:
        write_csv(path, {"lag": self.lags, "value": self.values}, comments)


@dataclass
class PsdCurve:
    omegas: np.ndarray
    values: np.ndarray
    note: str = "two-sided angular density, integral S dw/(2 pi) = R(0)"

    def to_csv(self, path: str | Path, comments: Iterable[str] = ()) -> None:
        write_csv(path, {"omega": self.omegas, "value": self.values}, [*comments, self.note])


@dataclass
class Interferogram:
    lags: np.ndarray
    values: np.ndarray
    n_c: int
    ci95: np.ndarray = field(repr=False)

    def to_csv(self, path: str | Path, comments: Iterable[str] = ()) -> None:
        write_csv(
            path,
            {"lag": self.lags, "value": self.values, "ci95": self.ci95},
            [*comments, f"n_c = {self.n_c}"],
        )


# --- exact correlation ---------------------------------------------------------


def _overlap_mean(a: BinaryWaveform, b: BinaryWaveform, shift: float, length: float) -> float:
    """``(1/L) * integral_0^L a(t) b(t + shift) dt`` for ``shift >= 0``.

    The product flips sign at every transition of either factor inside ``(0, L)``,
    so the integral is an alternating sum over the merged breakpoints.
    """
    ta = a.transitions
    ta = ta[: np.searchsorted(ta, length, side="left")]
    tb = b.transitions
    lo = np.searchsorted(tb, shift, side="right")
    hi = np.searchsorted(tb, shift + length, side="left")
    tb = tb[lo:hi] - shift
    p0 = a.initial_level * (b.initial_level if lo % 2 == 0 else -b.initial_level)
    merged = np.sort(np.concatenate((ta, tb)), kind="stable")
    # sum_k (-1)^k (c_{k+1} - c_k) with c_0 = 0, c_{n+1} = L, regrouped by breakpoint
    n = merged.size
    total = (length if n % 2 == 0 else -length) + 2.0 * (merged[0::2].sum() - merged[1::2].sum())
    return p0 * total / length


def _check_lags(lags, duration: float) -> np.ndarray:
    lags = np.atleast_1d(np.asarray(lags, dtype=float))
    if np.any(np.abs(lags) >= duration):
        raise OutOfRangeError(f"lag magnitude must be below the duration {duration}")
    return lags


def acf_exact(w: BinaryWaveform, lags) -> AcfCurve:
    """Time-average autocorrelation with the ``1/(T - |tau|)`` normalization, computed exactly."""
    lags = _check_lags(lags, w.duration)
    vals = np.empty(lags.size)
    for i, tau in enumerate(np.abs(lags)):
        vals[i] = 1.0 if tau == 0 else _overlap_mean(w, w, tau, w.duration - tau)
    return AcfCurve(lags, vals, w.duration - float(np.max(np.abs(lags))))


def xcorr_exact(w1: BinaryWaveform, w2: BinaryWaveform, lags) -> AcfCurve:
    """Normalized cross-correlation ``mean_t w1(t) w2(t + tau)`` over the overlapping window."""
    duration = min(w1.duration, w2.duration)
    lags = _check_lags(lags, duration)
    vals = np.empty(lags.size)
    for i, tau in enumerate(lags):
        length = duration - abs(tau)
        vals[i] = _overlap_mean(w1, w2, tau, length) if tau >= 0 else _overlap_mean(w2, w1, -tau, length)
    return AcfCurve(lags, vals, duration - float(np.max(np.abs(lags))))


def acf_oracle_dense(w: BinaryWaveform, lags, grid_step: float) -> AcfCurve:
    """Brute-force check: midpoint-sample ``w`` and average lagged products.

    Lags are rounded to the nearest multiple of ``grid_step``.
    """
    lags = _check_lags(lags, w.duration)
    if w.n_transitions > 1:
        min_gap = float(np.min(np.diff(np.concatenate(([0.0], w.transitions, [w.duration])))))
        if grid_step >= min_gap / 4:
            warnings.warn(
                f"grid_step {grid_step:g} is not below a quarter of the shortest piece {min_gap:g}",
                PrecisionWarning,
                stacklevel=2,
            )
    x = w.sample(grid_step, offset=grid_step / 2).astype(float)
    m = x.size
    vals = np.empty(lags.size)
    for i, tau in enumerate(np.abs(lags)):
        k = int(round(tau / grid_step))
        vals[i] = np.dot(x[: m - k], x[k:]) / (m - k)
    return AcfCurve(lags, vals, w.duration - float(np.max(np.abs(lags))))


# --- crossing statistics ---------------------------------------------------


def crossing_rate(w: BinaryWaveform) -> float:
    return w.n_transitions / w.duration


def interferogram(w: BinaryWaveform, lags, max_crossings: int | None = None, *, chunk: int = 4096) -> Interferogram:
    """Crossing-aligned trajectories, sign-flipped at downcrossings, averaged lag by lag.

    Crossings whose lag window would leave ``[0, duration]`` are skipped; at most
    ``max_crossings`` consecutive eligible crossings are used.
    """
    if w.n_transitions < 2:
        raise EmptyEstimateError("need at least two crossings")
    lags = np.atleast_1d(np.asarray(lags, dtype=float))
    t = w.transitions
    t = t[(t + lags.min() >= 0) & (t + lags.max() <= w.duration)]
    if max_crossings is not None:
        t = t[:max_crossings]
    if t.size == 0:
        raise EmptyEstimateError("no crossing has its whole lag window inside the waveform")
    total = np.zeros(lags.size)
    total_sq = np.zeros(lags.size)
    for start in range(0, t.size, chunk):
        ti = t[start : start + chunk]
        after = w.values_at(ti).astype(np.int16)
        traj = after[:, None] * w.values_at(ti[:, None] + lags[None, :])
        total += traj.sum(axis=0)
        total_sq += (traj.astype(float) ** 2).sum(axis=0)
    n = t.size
    mean = total / n
    var = (total_sq - n * mean**2) / (n - 1) if n > 1 else np.zeros_like(mean)
    ci = 1.96 * np.sqrt(np.clip(var, 0.0, None) / n)
    return Interferogram(lags, mean, int(n), ci)


def cusp_rate(acf: AcfCurve) -> float:
    """Crossing rate from the cusp: ``(1 - R(tau_1)) / (2 tau_1)`` at the smallest positive lag."""
    pos = acf.lags > 0
    i = np.argmin(np.where(pos, acf.lags, np.inf))
    return (1.0 - acf.values[i]) / (2.0 * acf.lags[i])


# --- spectrum ------------------------------------------------------------------


def psd_estimate(
    w: BinaryWaveform,
    omega_grid: Sequence[float] | np.ndarray | None = None,
    segment_length: float | None = None,
    *,
    sample_step: float | None = None,
    block_segments: int = 256,
) -> PsdCurve:
    """Welch estimate of the two-sided angular PSD.

    The waveform is point-sampled every ``sample_step`` (default: 32 samples per mean
    piece, i.e. ``1/(64 n0)``), cut into half-overlapping Hann-tapered segments of
    ``segment_length`` seconds (default ``64/n0``) and the periodograms averaged.
    Sampling is done block by block so long waveforms never materialize at once.
    Without ``omega_grid`` the native nonnegative grid is returned, otherwise the
    estimate is linearly interpolated onto ``|omega_grid|``.
    """
    n0 = crossing_rate(w)
    if sample_step is None:
        if n0 == 0:
            raise InsufficientDataError("constant waveform: give sample_step explicitly")
        sample_step = 1.0 / (64.0 * n0)
    if segment_length is None:
        segment_length = 64.0 / n0 if n0 > 0 else w.duration / 8
    if w.duration < 4 * segment_length:
        raise InsufficientDataError(f"duration {w.duration} holds fewer than 4 segments of {segment_length}")
    nperseg = int(round(segment_length / sample_step))
    hop = nperseg // 2
    n_samples = int(math.floor(w.duration / sample_step))
    n_seg = (n_samples - nperseg) // hop + 1
    fs = 1.0 / sample_step

    acc = None
    for j0 in range(0, n_seg, block_segments):
        b = min(block_segments, n_seg - j0)
        idx = j0 * hop + np.arange((b - 1) * hop + nperseg)
        x = w.values_at(idx * sample_step).astype(float)
        f, p = signal.welch(
            x, fs=fs, window="hann", nperseg=nperseg, noverlap=nperseg - hop,
            detrend=False, return_onesided=False, scaling="density",
        )
        acc = p * b if acc is None else acc + p * b
    p = acc / n_seg
    keep = f >= 0
    native_w = 2 * np.pi * f[keep]
    native_s = p[keep]
    order = np.argsort(native_w)
    native_w, native_s = native_w[order], native_s[order]
    if omega_grid is None:
        return PsdCurve(native_w, native_s)
    omega_grid = np.asarray(omega_grid, dtype=float)
    if np.max(np.abs(omega_grid)) > native_w[-1]:
        raise OutOfRangeError(f"omega beyond the sampling Nyquist limit {native_w[-1]:.4g}")
    return PsdCurve(omega_grid, np.interp(np.abs(omega_grid), native_w, native_s))


def spectral_second_moment(curve: PsdCurve) -> float:
    """``integral w^2 S(w) dw / (2 pi)`` over the estimate's two-sided grid."""
    return 2 * np.trapezoid(curve.omegas**2 * curve.values, curve.omegas) / (2 * np.pi)


def spectral_power(curve: PsdCurve) -> float:
    return 2 * np.trapezoid(curve.values, curve.omegas) / (2 * np.pi)


def sup_error(values, reference) -> float:
    return float(np.max(np.abs(np.asarray(values) - np.asarray(reference))))


def rms_relative_error(values, reference) -> float:
    values, reference = np.asarray(values), np.asarray(reference)
    return float(np.linalg.norm(values - reference) / np.linalg.norm(reference))
