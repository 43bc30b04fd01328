"""Estimator-versus-formula check suites shared by ``impulsewave verify`` and the acceptance tests.

Every threshold lives in :data:`TOLERANCES`; bump :data:`TOLERANCE_VERSION` when one changes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analytic as an
from .analysis import (
    AcfCurve,
    acf_exact,
    acf_oracle_dense,
    crossing_rate,
    interferogram,
    psd_estimate,
    rms_relative_error,
    sup_error,
)
from .core import BinaryWaveform, ChipDistribution, RandomSource, dumps_waveform
from .generators import GaussianSpec, gen_bernoulli, gen_hardlimited_gaussian, gen_product, gen_telegraph
from .prbs import PRIMITIVE_TAPS, LfsrConfig, SpreadClockConfig, gen_prbs_waveform, lfsr_step

TOLERANCE_VERSION = "1"

TOLERANCES: dict[str, float] = {
    "random_chip_sup": 0.02,
    "prbs_sup": 0.02,
    "telegraph_acf_sup": 0.01,
    "telegraph_psd_rms": 0.05,
    "arcsine_acf_sup": 0.02,
    "arcsine_rate_rel": 0.02,
    "interferogram_bernoulli_sup": 0.05,
    "interferogram_gaussian_coverage": 0.90,
    "psd_limit_rel": 0.05,
    "psd_floor": 0.0,
    "product_rate_abs": 0.05,
    "product_acf_sup": 0.02,
    "raised_cosine_quad": 1e-9,
    "model_conditions": 1e-12,
    "oracle_sup": 1e-3,
    "tangent_slack": 0.02,
}


@dataclass
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool
    relation: str = "<"

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name}: measured={self.measured:.6g} {self.relation} tol={self.tolerance:.6g}"


def _below(name: str, measured: float, key: str) -> CheckResult:
    tol = TOLERANCES[key]
    return CheckResult(name, float(measured), tol, bool(measured < tol), "<")


def _at_least(name: str, measured: float, tol: float) -> CheckResult:
    return CheckResult(name, float(measured), tol, bool(measured >= tol), ">=")


def tangent_check(label: str, acf: AcfCurve, n0_hat: float) -> CheckResult:
    """Smallest margin of ``acf - (1 - 2 n0 |tau|)``; must stay above ``-slack``."""
    margin = float(np.min(acf.values - an.tangent_line(n0_hat, acf.lags)))
    return _at_least(f"tangent[{label}]", margin, -TOLERANCES["tangent_slack"])


# --- suites ------------------------------------------------------------------


def suite_random_chip(alphas=(0.25, 0.5, 1.0), chips: float = 1e6, seed: int = 0) -> list[CheckResult]:
    lags = np.linspace(0.0, 2.5, 251)
    out = []
    for i, a in enumerate(alphas):
        w = gen_bernoulli(ChipDistribution.uniform(1.0, a), chips, RandomSource(seed, 100 + i))
        acf = acf_exact(w, lags)
        ref = an.acf_model(an.ModelParams(1.0, a), lags)
        out.append(_below(f"random-chip acf[alpha={a}]", sup_error(acf.values, ref), "random_chip_sup"))
        out.append(tangent_check(f"random-chip alpha={a}", acf, crossing_rate(w)))
    return out


def suite_prbs(width: int = 20, k: int = 64, alpha: float = 0.5, seed: int = 0) -> list[CheckResult]:
    lfsr = LfsrConfig.default(width)
    clk = SpreadClockConfig.uniform(1.0, alpha, k, "permute_per_cycle", seed)
    w = gen_prbs_waveform(lfsr, clk, n_chips=lfsr.period)
    lags = np.linspace(0.0, 2.5, 251)
    acf = acf_exact(w, lags)
    ref = an.acf_model(an.ModelParams(1.0, alpha), lags)
    return [
        _below(f"prbs[m={width},K={k},alpha={alpha}]", sup_error(acf.values, ref), "prbs_sup"),
        tangent_check("prbs", acf, crossing_rate(w)),
    ]


def suite_telegraph(n0: float = 1.0, seed: int = 0) -> list[CheckResult]:
    w = gen_telegraph(n0, 1e6 / n0, RandomSource(seed, 200))
    lags = np.linspace(0.0, 2.0 / n0, 201)
    acf = acf_exact(w, lags)
    omegas = np.linspace(-10 * n0, 10 * n0, 401)
    psd = psd_estimate(w, omegas)
    return [
        _below("telegraph acf", sup_error(acf.values, an.acf_telegraph(n0, lags)), "telegraph_acf_sup"),
        _below("telegraph psd", rms_relative_error(psd.values, an.psd_telegraph(n0, omegas)), "telegraph_psd_rms"),
        tangent_check("telegraph", acf, crossing_rate(w)),
    ]


def suite_arcsine(n0: float = 1.0, duration: float = 1e5, seed: int = 0) -> list[CheckResult]:
    out = []
    lags = np.linspace(0.0, 2.0 / n0, 201)
    for i, kind in enumerate(("gaussian", "uniform_band")):
        w = gen_hardlimited_gaussian(GaussianSpec(kind, n0), duration, RandomSource(seed, 300 + i))
        acf = acf_exact(w, lags)
        rate = crossing_rate(w)
        out.append(_below(f"arcsine acf[{kind}]", sup_error(acf.values, an.acf_hardlimited(kind, n0, lags)), "arcsine_acf_sup"))
        out.append(_below(f"arcsine rate[{kind}]", abs(rate - n0) / n0, "arcsine_rate_rel"))
        out.append(tangent_check(f"arcsine {kind}", acf, rate))
    return out


def gaussian_interferograms(n_curves: int = 5, n_c: int = 256, seed: int = 0, lags=None):
    """The five-curve bundle of crossing-aligned averages for hard-limited Gaussian-acf noise."""
    lags = np.linspace(-2.0, 2.0, 81) if lags is None else lags
    spec = GaussianSpec("gaussian", 1.0)
    curves = []
    for i in range(n_curves):
        w = gen_hardlimited_gaussian(spec, 2.0 * n_c + 10, RandomSource(seed, 400 + i))
        curves.append(interferogram(w, lags, n_c))
    return lags, curves


def suite_interferogram(seed: int = 0) -> list[CheckResult]:
    d = ChipDistribution.degenerate(1.0)
    w = gen_bernoulli(d, 2.5e4, RandomSource(seed, 410))
    # offset grid keeps lags off the jump points 0 and +-t_c
    lags = np.linspace(-2.0025, 2.0025, 201)
    it = interferogram(w, lags, 10_000)
    out = [_below(f"interferogram bernoulli[n_c={it.n_c}]",
                  sup_error(it.values, an.interferogram_mean_randomchip(d, lags)), "interferogram_bernoulli_sup")]
    glags, curves = gaussian_interferograms(seed=seed)
    ref = an.interferogram_mean_gaussian(1.0, glags)
    inside = [np.abs(c.values - ref) <= c.ci95 for c in curves]
    pooled = float(np.mean(np.concatenate(inside)))
    worst = float(min(np.mean(x) for x in inside))
    tol = TOLERANCES["interferogram_gaussian_coverage"]
    out.append(_at_least("interferogram gaussian coverage[5 x n_c=256, pooled]", pooled, tol))
    out.append(CheckResult("interferogram gaussian coverage[worst single curve, info]", worst, tol, True, "~"))
    return out


def suite_psd_limit(alphas=(0.5, 1.0), chips: float = 2e5, seed: int = 0) -> list[CheckResult]:
    out = []
    for i, a in enumerate(alphas):
        w = gen_bernoulli(ChipDistribution.uniform(1.0, a), chips, RandomSource(seed, 500 + i))
        est = float(psd_estimate(w, [0.0], segment_length=128.0).values[0])
        target = 1 + a * a / 3
        out.append(_below(f"psd limit[alpha={a}]", abs(est - target) / target, "psd_limit_rel"))
    grid = np.linspace(-40 * np.pi, 40 * np.pi, 10_000)
    floor = min(
        float(np.min(an.psd_randomchip(ChipDistribution(kind, 1.0, a), grid)))
        for kind in ("uniform", "raised_cosine")
        for a in np.linspace(0.1, 1.0, 10)
    )
    out.append(_at_least("psd analytic nonnegative[10^4 points]", floor, TOLERANCES["psd_floor"]))
    return out


def suite_product(seed: int = 0) -> list[CheckResult]:
    out = []
    b = gen_bernoulli(ChipDistribution.uniform(1.0, 0.5), 1e4, RandomSource(seed, 600))
    v = gen_telegraph(0.7, b.duration, RandomSource(seed, 601))
    z = gen_product(b, v)
    exact = gen_product(z, v) == b and gen_product(z, b) == v
    out.append(CheckResult("product demodulation bit-exact", float(exact), 1.0, exact, "=="))

    w1 = gen_telegraph(1.0, 1e5, RandomSource(seed, 602))
    w2 = gen_telegraph(2.0, 1e5, RandomSource(seed, 603))
    zz = gen_product(w1, w2)
    out.append(_below("product rate additivity", abs(crossing_rate(zz) - 3.0), "product_rate_abs"))

    lags = np.linspace(0.0, 2.5, 126)
    b = gen_bernoulli(ChipDistribution.uniform(1.0, 0.5), 1e5, RandomSource(seed, 604))
    v = gen_telegraph(0.5, b.duration, RandomSource(seed, 605))
    z = gen_product(b, v)
    az = acf_exact(z, lags)
    factor = acf_exact(b, lags).values * acf_exact(v, lags).values
    out.append(_below("product acf factorization", sup_error(az.values, factor), "product_acf_sup"))
    out.append(tangent_check("product", az, crossing_rate(z)))
    return out


def suite_raised_cosine() -> list[CheckResult]:
    d = ChipDistribution.raised_cosine(1.0, 1.0)
    taus = np.linspace(0.0, 2.5, 101)
    quad = an.acf_from_cdf(d, taus)
    closed = an.acf_raised_cosine_full(1.0, taus)
    grid = np.linspace(0.0, 2.0, 1000)
    lower = an.acf_triangle(1.0, grid)
    middle = an.acf_raised_cosine_full(1.0, grid)
    upper = an.acf_model(an.ModelParams(1.0, 1.0), grid)
    ordering = float(min(np.min(middle - lower), np.min(upper - middle)))
    return [
        _below("raised cosine quadrature vs closed form", sup_error(quad, closed), "raised_cosine_quad"),
        _at_least("bound ordering triangle <= raised cosine <= model", ordering, -1e-12),
    ]


def model_condition_margins(alpha: float, taus: np.ndarray) -> dict[str, float]:
    p = an.ModelParams(1.0, alpha)
    f = lambda t: np.asarray(an.acf_model(p, t))  # noqa: E731
    far = taus[taus > 1 + alpha]
    return {
        "a": abs(float(f(0.0)) - 1.0),
        "b": float(np.max(np.abs(f(taus) - f(-taus)))),
        "c": float(np.max(f(taus) ** 2 - 0.5 * (1 + f(2 * taus)))),
        "d": float(np.max(np.abs(f(far)))) if far.size else 0.0,
    }


def suite_model_conditions() -> list[CheckResult]:
    taus = np.linspace(-3.0, 3.0, 6001)
    out = []
    for a in np.round(np.linspace(0.0, 1.0, 11), 10):
        m = model_condition_margins(float(a), taus)
        worst = max(m["a"], m["b"], m["c"], m["d"])
        out.append(_below(f"model conditions a-d[alpha={a:.1f}]", worst, "model_conditions"))
    return out


def suite_oracle(seed: int = 0) -> list[CheckResult]:
    out = []
    lags = np.round(np.linspace(0.0, 2.0, 101), 10)
    for i, d in enumerate((ChipDistribution.degenerate(1.0), ChipDistribution.uniform(1.0, 0.5), ChipDistribution.raised_cosine(1.0, 0.8))):
        w = gen_bernoulli(d, 100.0, RandomSource(seed, 700 + i))
        exact = acf_exact(w, lags).values
        dense = acf_oracle_dense(w, lags, 1e-4).values
        out.append(_below(f"oracle equivalence[{d.kind}]", sup_error(exact, dense), "oracle_sup"))
    return out


def lfsr_orbit(cfg: LfsrConfig) -> tuple[int, int, bool]:
    """Walk the register from its initial state: (period, ones per period, zero state seen)."""
    state, steps, ones, zero_seen = cfg.initial_state, 0, 0, False
    while True:
        state, sym = lfsr_step(state, cfg)
        ones += sym < 0
        steps += 1
        zero_seen |= state == 0
        if state == cfg.initial_state or steps > cfg.period:
            return steps, ones, zero_seen


def suite_lfsr(max_width: int = 16) -> list[CheckResult]:
    out = []
    for m in range(2, max_width + 1):
        cfg = LfsrConfig(m, PRIMITIVE_TAPS[m], 1)
        period, ones, zero_seen = lfsr_orbit(cfg)
        ok = period == 2**m - 1 and ones == 2 ** (m - 1) and not zero_seen
        out.append(CheckResult(f"lfsr m={m} period/balance", period, 2**m - 1, ok, "=="))
    lfsr = LfsrConfig.default(16)
    clk = SpreadClockConfig.uniform(1.0, 0.5, 64, "permute_per_cycle", 11)
    same = _waveform_bytes(gen_prbs_waveform(lfsr, clk, 5000.0)) == _waveform_bytes(gen_prbs_waveform(lfsr, clk, 5000.0))
    out.append(CheckResult("prbs deterministic replay", float(same), 1.0, same, "=="))
    return out


def _waveform_bytes(w: BinaryWaveform) -> bytes:
    return dumps_waveform(w).encode("utf-8")


SUITES: dict[str, Callable[..., list[CheckResult]]] = {
    "random-chip": suite_random_chip,
    "prbs": suite_prbs,
    "telegraph": suite_telegraph,
    "arcsine": suite_arcsine,
    "interferogram": suite_interferogram,
    "psd-limit": suite_psd_limit,
    "product": suite_product,
    "product-rate": lambda seed=0: [r for r in suite_product(seed) if "rate" in r.name],
    "raised-cosine": suite_raised_cosine,
    "model-conditions": suite_model_conditions,
    "oracle": suite_oracle,
    "lfsr": suite_lfsr,
}

SUITE_ALIASES = {"eq20": "random-chip"}


def format_report(results: list[CheckResult]) -> str:
    buf = io.StringIO()
    for r in results:
        buf.write(r.line() + "\n")
    n_fail = sum(not r.passed for r in results)
    buf.write(f"{len(results) - n_fail}/{len(results)} checks passed (tolerances v{TOLERANCE_VERSION})\n")
    return buf.getvalue()
