"""Closed-form autocorrelation, spectrum and interferogram curves.

All functions are vectorized over ``tau`` / ``omega``.  Spectra use the
two-sided angular convention ``S(w) = integral R(tau) exp(-i w tau) dtau`` so that
``integral S dw / (2 pi) = R(0) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .core import ChipDistribution


@dataclass(frozen=True)
class ModelParams:
    t_c: float = 1.0
    alpha: float = 0.5

    def __post_init__(self) -> None:
        if not self.t_c > 0:
            raise ValueError(f"t_c must be positive, got {self.t_c}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


# --- random telegraph signal --------------------------------------------


def acf_telegraph(n0: float, tau):
    return _out(np.exp(-2.0 * n0 * np.abs(np.asarray(tau, dtype=float))))


def psd_telegraph(n0: float, omega):
    omega = np.asarray(omega, dtype=float)
    return _out(4.0 * n0 / (omega**2 + 4.0 * n0**2))


# --- hard-limited Gaussian noise -----------------------------------------


def acf_arcsine(r_x):
    """Van Vleck: correlation of ``sgn(X)`` from the normalized correlation of ``X``."""
    r_x = np.asarray(r_x, dtype=float)
    if np.any(np.abs(r_x) > 1.0):
        raise ValueError("normalized correlation must satisfy |r_x| <= 1")
    return _out(2.0 / np.pi * np.arcsin(r_x))


def rx_gaussian(n0: float, tau):
    tau = np.asarray(tau, dtype=float)
    return _out(np.exp(-(np.pi * n0 * tau) ** 2 / 2))


def rx_uniform_band(n0: float, tau):
    """``sin(W tau)/(W tau)`` with ``W = sqrt(3) pi n0`` (Rice rate ``n0``)."""
    w = np.sqrt(3.0) * np.pi * n0
    return _out(np.sinc(w * np.asarray(tau, dtype=float) / np.pi))


def acf_hardlimited(kind: str, n0: float, tau):
    if kind == "gaussian":
        return acf_arcsine(rx_gaussian(n0, tau))
    if kind == "uniform_band":
        return acf_arcsine(np.clip(rx_uniform_band(n0, tau), -1.0, 1.0))
    raise ValueError(f"unknown spectrum kind {kind!r}")


def interferogram_mean_gaussian(n0: float, tau):
    """Crossing-conditioned mean ``-R'(tau)/(2 n0)`` of hard-limited Gaussian-acf noise.

    Odd in ``tau``; the removable singularity is filled with the right limit ``+1`` at 0.
    """
    tau = np.asarray(tau, dtype=float)
    x = (np.pi * n0 * tau) ** 2
    r = np.exp(-x / 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.pi * n0 * tau * r / np.sqrt(-np.expm1(-x))
    return _out(np.where(tau == 0.0, 1.0, out))


# --- Bernoulli processes ------------------------------------------------------


def acf_triangle(t_c: float, tau):
    u = np.abs(np.asarray(tau, dtype=float)) / t_c
    return _out(np.clip(1.0 - u, 0.0, None))


def psd_bernoulli(t_c: float, omega):
    omega = np.asarray(omega, dtype=float)
    # 4 sin^2(w t_c / 2) / (w^2 t_c), written through sinc so w = 0 is exact
    return _out(t_c * np.sinc(omega * t_c / (2 * np.pi)) ** 2)


def acf_model(p: ModelParams, tau):
    """Triangle with its foot replaced by a tangent parabola (uniform chip modulation)."""
    u = np.abs(np.asarray(tau, dtype=float)) / p.t_c
    a = p.alpha
    if a == 0.0:
        return _out(np.clip(1.0 - u, 0.0, None))
    with np.errstate(over="ignore"):
        # unselected branch may overflow for subnormal alpha
        out = np.where(u < 1 - a, 1.0 - u, (u - 1 - a) ** 2 / (4 * a))
    return _out(np.where(u < 1 + a, out, 0.0))


def acf_model_derivative(p: ModelParams, tau):
    u = np.asarray(tau, dtype=float) / p.t_c
    s, u = np.sign(u), np.abs(u)
    a = p.alpha
    if a == 0.0:
        d = np.where(u < 1, -1.0, 0.0)
    else:
        with np.errstate(over="ignore"):
            d = np.where(u < 1 - a, -1.0, (u - 1 - a) / (2 * a))
        d = np.where(u < 1 + a, d, 0.0)
    return _out(s * d / p.t_c)


def acf_raised_cosine_full(t_c: float, tau):
    """Closed form for raised-cosine chip modulation at full spread (alpha = 1)."""
    u = np.abs(np.asarray(tau, dtype=float)) / t_c
    val = 1.0 - u + u**2 / 4 - np.sin(np.pi * u / 2) ** 2 / np.pi**2
    return _out(np.where(u < 2.0, val, 0.0))


def _cdf_integral(d: ChipDistribution, x: float) -> float:
    lo, hi = d.support
    if x <= lo:
        return 0.0
    tail = max(0.0, x - hi)
    top = min(x, hi)
    if top <= lo:
        return tail
    val, _ = integrate.quad(lambda s: float(d.cdf(s)), lo, top, epsabs=1e-10, epsrel=1e-12, limit=200)
    return val + tail


def acf_from_cdf(d: ChipDistribution, tau):
    """``1 - |tau|/t_c + (1/t_c) * integral_0^|tau| F(s) ds`` by adaptive quadrature."""
    tau = np.abs(np.asarray(tau, dtype=float))
    flat = np.array([_cdf_integral(d, x) for x in tau.reshape(-1)]).reshape(tau.shape)
    return _out(1.0 - tau / d.t_c + flat / d.t_c)


def acf_derivative_from_cdf(d: ChipDistribution, tau):
    """Odd derivative ``sgn(tau) [F(|tau|) - 1] / t_c``; at 0 the right derivative."""
    tau = np.asarray(tau, dtype=float)
    s = np.where(tau < 0, -1.0, 1.0)
    return _out(s * (np.asarray(d.cdf(np.abs(tau))) - 1.0) / d.t_c)


def interferogram_mean_randomchip(d: ChipDistribution, tau):
    """``-t_c R'(tau)``: probability that the chip following a crossing outlasts ``|tau|``, signed."""
    return _out(-d.t_c * np.asarray(acf_derivative_from_cdf(d, tau)))


def chip_characteristic(d: ChipDistribution, omega):
    """Fourier transform of the centered chip density."""
    x = np.abs(np.asarray(omega, dtype=float)) * d.half_width
    if d.is_degenerate:
        return np.ones_like(x)
    if d.kind == "uniform":
        return np.sinc(x / np.pi)
    # pi^2 sin(x) / (x (pi^2 - x^2)); both removable singularities handled
    near = np.abs(x - np.pi) < 1e-3
    with np.errstate(invalid="ignore", divide="ignore"):
        far = np.sinc(x / np.pi) * np.pi**2 / (np.pi**2 - x**2)
        close = np.pi**2 * np.sinc((np.pi - x) / np.pi) / (np.where(x == 0, 1.0, x) * (np.pi + x))
    return np.where(near, close, far)


def psd_randomchip(d: ChipDistribution, omega):
    """``2 [1 - Psi(w) cos(w t_c)] / (w^2 t_c)``; near ``w = 0`` the limit ``t_c + var/t_c``."""
    omega = np.asarray(omega, dtype=float)
    t = d.t_c
    small = np.abs(omega * t) < 1e-4
    w = np.where(small, 1.0, omega)
    psi = chip_characteristic(d, w)
    # 1 - psi cos = 2 sin^2(w t/2) + cos(w t) (1 - psi)
    body = 2 * np.sin(w * t / 2) ** 2 + np.cos(w * t) * (1.0 - psi)
    val = 2.0 * body / (w**2 * t)
    limit = t + d.variance / t
    return _out(np.where(small, limit, val))


# --- products and rates ------------------------------------------------------


def acf_product(*acfs):
    """Autocorrelation of a product of independent binary processes."""
    out = np.ones_like(np.asarray(acfs[0], dtype=float))
    for a in acfs:
        out = out * np.asarray(a, dtype=float)
    return _out(out)


def crossing_rate_bernoulli(t_c: float) -> float:
    return 1.0 / (2.0 * t_c)


def tangent_line(n0: float, tau):
    return _out(1.0 - 2.0 * n0 * np.abs(np.asarray(tau, dtype=float)))
