"""Command-line front end.

Exit codes: 0 success, 1 a verify check failed, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import analytic as an
from .analysis import acf_exact, acf_oracle_dense, interferogram, psd_estimate, write_csv
from .checks import SUITE_ALIASES, SUITES, TOLERANCE_VERSION, format_report, gaussian_interferograms
from .core import ChipDistribution, RandomSource, read_waveform, write_waveform
from .generators import GaussianSpec, gen_bernoulli, gen_hardlimited_gaussian, gen_telegraph
from .prbs import CONFIG_KEYS, gen_prbs_waveform, parse_kv, prbs_configs

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2

FIGURES = (1, 2, 4, 5, 6, 7)
SCHEMATIC_FIGURES = (3, 8)


class UsageError(Exception):
    pass


def _flag(key: str) -> str:
    return "--" + key.replace(".", "-").replace("_", "-")


def _header(args: argparse.Namespace) -> list[str]:
    skip = {"func", "output"}
    items = [f"{k} = {v}" for k, v in sorted(vars(args).items()) if k not in skip and v is not None]
    return [f"impulsewave {__version__}", *items]


def _lag_grid(max_lag: float, step: float, symmetric: bool) -> np.ndarray:
    n = int(round(max_lag / step))
    k = np.arange(-n if symmetric else 0, n + 1)
    return k * step


# --- generate -------------------------------------------------------------------


def _prbs_values(args: argparse.Namespace) -> dict[str, str]:
    values = parse_kv(Path(args.config).read_text(encoding="utf-8")) if args.config else {}
    for key in CONFIG_KEYS:
        v = getattr(args, key.replace(".", "_"))
        if v is not None:
            values[key] = str(v)
    values.setdefault("clock.seed", str(args.seed))
    return values


def cmd_generate(args: argparse.Namespace) -> int:
    rng = RandomSource(args.seed, args.stream)
    if args.process == "telegraph":
        w = gen_telegraph(args.n0, args.duration, rng)
    elif args.process == "gaussian":
        w = gen_hardlimited_gaussian(GaussianSpec(args.spectrum, args.n0, args.oversample), args.duration, rng)
    elif args.process == "bernoulli":
        kind = "degenerate" if args.alpha == 0 else args.chip_kind
        w = gen_bernoulli(ChipDistribution(kind, args.tc, args.alpha), args.duration, rng)
    else:
        values = _prbs_values(args)
        lfsr, clk = prbs_configs(values)
        args.resolved_prbs = ", ".join(f"{k}={values[k]}" for k in sorted(values))
        w = gen_prbs_waveform(lfsr, clk, args.duration)
    write_waveform(w, args.output, _header(args))
    return EXIT_OK


# --- estimators ---------------------------------------------------------------------


def cmd_acf(args: argparse.Namespace) -> int:
    w = read_waveform(args.input)
    lags = _lag_grid(args.max_lag, args.lag_step, args.symmetric)
    curve = acf_oracle_dense(w, lags, args.oracle_step) if args.oracle_step else acf_exact(w, lags)
    curve.to_csv(args.output, _header(args))
    return EXIT_OK


def cmd_psd(args: argparse.Namespace) -> int:
    w = read_waveform(args.input)
    omegas = np.linspace(0.0, args.omega_max, args.n_omega)
    curve = psd_estimate(w, omegas, args.segment_length, sample_step=args.sample_step)
    curve.to_csv(args.output, _header(args))
    return EXIT_OK


def cmd_interferogram(args: argparse.Namespace) -> int:
    w = read_waveform(args.input)
    lags = _lag_grid(args.max_lag, args.lag_step, True)
    curve = interferogram(w, lags, args.max_crossings)
    curve.to_csv(args.output, _header(args))
    return EXIT_OK


# --- analytic -----------------------------------------------------------------------

ANALYTIC_CURVES = {
    "telegraph-acf": ("lag", lambda a, x: an.acf_telegraph(a.n0, x)),
    "telegraph-psd": ("omega", lambda a, x: an.psd_telegraph(a.n0, x)),
    "arcsine-gaussian": ("lag", lambda a, x: an.acf_hardlimited("gaussian", a.n0, x)),
    "arcsine-band": ("lag", lambda a, x: an.acf_hardlimited("uniform_band", a.n0, x)),
    "interferogram-gaussian": ("lag", lambda a, x: an.interferogram_mean_gaussian(a.n0, x)),
    "triangle": ("lag", lambda a, x: an.acf_triangle(a.tc, x)),
    "bernoulli-psd": ("omega", lambda a, x: an.psd_bernoulli(a.tc, x)),
    "model": ("lag", lambda a, x: an.acf_model(an.ModelParams(a.tc, a.alpha), x)),
    "randomchip-acf": ("lag", lambda a, x: an.acf_from_cdf(_chip(a), x)),
    "randomchip-derivative": ("lag", lambda a, x: an.acf_derivative_from_cdf(_chip(a), x)),
    "randomchip-psd": ("omega", lambda a, x: an.psd_randomchip(_chip(a), x)),
    "raised-cosine-full": ("lag", lambda a, x: an.acf_raised_cosine_full(a.tc, x)),
}


def _chip(a: argparse.Namespace) -> ChipDistribution:
    return ChipDistribution("degenerate" if a.alpha == 0 else a.chip_kind, a.tc, a.alpha)


def cmd_analytic(args: argparse.Namespace) -> int:
    axis, fn = ANALYTIC_CURVES[args.curve]
    x = np.linspace(args.x_min, args.x_max, args.n_points)
    write_csv(args.output, {axis: x, "value": fn(args, x)}, _header(args))
    return EXIT_OK


# --- figures ----------------------------------------------------------------------


def reproduce_figure(fig: int, outdir: Path, seed: int = 0) -> list[Path]:
    """Write one CSV per curve of the figure into ``outdir``; returns the paths."""
    if fig in SCHEMATIC_FIGURES:
        raise UsageError(f"figure {fig} is a schematic diagram and carries no data")
    if fig not in FIGURES:
        raise UsageError(f"unknown figure {fig}; data figures are {FIGURES}")
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(name: str, cols: dict, note: str) -> None:
        p = outdir / f"fig{fig}_{name}.csv"
        write_csv(p, cols, [f"impulsewave {__version__} figure {fig}", note])
        written.append(p)

    lags = np.linspace(-2.5, 2.5, 1001)
    alphas = (0.0, 0.25, 0.5, 1.0)
    if fig == 1:
        n0 = 0.5
        emit("a_telegraph", {"lag": lags, "value": an.acf_telegraph(n0, lags)}, f"random telegraph n0={n0}")
        emit("b_arcsine_band", {"lag": lags, "value": an.acf_hardlimited("uniform_band", n0, lags)},
             f"hard-limited uniform-band Gaussian n0={n0}")
        emit("c_arcsine_gaussian", {"lag": lags, "value": an.acf_hardlimited("gaussian", n0, lags)},
             f"hard-limited Gaussian-psd noise n0={n0}")
        emit("d_triangle", {"lag": lags, "value": an.acf_triangle(1 / (2 * n0), lags)},
             f"constant-chip Bernoulli t_c={1 / (2 * n0)}")
    elif fig == 2:
        glags, curves = gaussian_interferograms(seed=seed)
        for i, c in enumerate(curves):
            emit(f"interferogram_{i}", {"lag": c.lags, "value": c.values, "ci95": c.ci95},
                 f"hard-limited Gaussian n0=1 n_c={c.n_c} seed={seed} stream={400 + i}")
        mean = an.interferogram_mean_gaussian(1.0, glags)
        emit("analytic_mean", {"lag": glags, "value": mean}, "limit -R'(tau)/(2 n0), n0=1")
    elif fig == 4:
        d0 = ChipDistribution.degenerate(1.0)
        d = ChipDistribution.uniform(1.0, 0.5)
        emit("a_acf", {"lag": lags, "value": an.acf_triangle(1.0, lags)}, "constant-chip t_c=1")
        emit("b_derivative", {"lag": lags, "value": an.acf_derivative_from_cdf(d0, lags)}, "step-form derivative")
        emit("c_random_acf", {"lag": lags, "value": an.acf_from_cdf(d, lags)}, "uniform chip modulation alpha=0.5")
        emit("d_random_derivative", {"lag": lags, "value": an.acf_derivative_from_cdf(d, lags)}, "alpha=0.5")
        spread = (d.pdf(lags) + d.pdf(-lags)) / d.t_c
        emit("e_random_second_derivative", {"lag": lags, "value": spread},
             "continuous part (p+ + p-)/t_c; the -2 delta(0)/t_c term is omitted")
    elif fig == 5:
        for a in alphas:
            emit(f"alpha_{a}", {"lag": lags, "value": an.acf_model(an.ModelParams(1.0, a), lags)},
                 f"uniform chip modulation t_c=1 alpha={a}")
    elif fig == 6:
        omegas = np.linspace(0.0, 8 * np.pi, 1001)
        for a in alphas:
            d = ChipDistribution("degenerate" if a == 0 else "uniform", 1.0, a)
            emit(f"alpha_{a}", {"omega": omegas, "value": an.psd_randomchip(d, omegas)},
                 f"uniform chip modulation t_c=1 alpha={a}")
    else:
        emit("lower_triangle", {"lag": lags, "value": an.acf_triangle(1.0, lags)}, "uniform alpha=0")
        emit("raised_cosine", {"lag": lags, "value": an.acf_raised_cosine_full(1.0, lags)}, "raised cosine alpha=1")
        emit("upper_model", {"lag": lags, "value": an.acf_model(an.ModelParams(1.0, 1.0), lags)}, "uniform alpha=1")
    return written


def cmd_reproduce_figure(args: argparse.Namespace) -> int:
    for p in reproduce_figure(args.fig, Path(args.outdir), args.seed):
        print(p)
    return EXIT_OK


# --- verify --------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    suite = SUITE_ALIASES.get(args.suite, args.suite)
    names = list(SUITES) if suite == "all" else [suite]
    if "product-rate" in names and "product" in names:
        names.remove("product-rate")
    results = []
    for name in names:
        kwargs = {"seed": args.seed} if name not in ("raised-cosine", "model-conditions", "lfsr") else {}
        if name == "random-chip":
            if args.alpha is not None:
                kwargs["alphas"] = (args.alpha,)
            if args.chips is not None:
                kwargs["chips"] = args.chips
        elif name == "prbs" and args.alpha is not None:
            kwargs["alpha"] = args.alpha
        results.extend(SUITES[name](**kwargs))
    sys.stdout.write(format_report(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


# --- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="impulsewave", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="synthesize a waveform file")
    g.add_argument("--process", required=True, choices=("telegraph", "gaussian", "bernoulli", "prbs"))
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--stream", type=int, default=0)
    g.add_argument("--duration", type=float, required=True)
    g.add_argument("--n0", type=float, default=1.0)
    g.add_argument("--spectrum", choices=("gaussian", "uniform_band"), default="gaussian")
    g.add_argument("--oversample", type=int, default=32)
    g.add_argument("--tc", type=float, default=1.0)
    g.add_argument("--alpha", type=float, default=0.0)
    g.add_argument("--chip-kind", choices=("uniform", "raised_cosine"), default="uniform")
    g.add_argument("--config", help="key = value file with lfsr.* / clock.* keys")
    for key in CONFIG_KEYS:
        g.add_argument(_flag(key), dest=key.replace(".", "_"), default=None)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("acf", help="autocorrelation of a waveform file")
    a.add_argument("--input", required=True)
    a.add_argument("--max-lag", type=float, default=2.5)
    a.add_argument("--lag-step", type=float, default=0.01)
    a.add_argument("--symmetric", action="store_true")
    a.add_argument("--oracle-step", type=float, help="use the dense-grid oracle with this step")
    a.add_argument("-o", "--output", required=True)
    a.set_defaults(func=cmd_acf)

    s = sub.add_parser("psd", help="averaged-periodogram spectrum of a waveform file")
    s.add_argument("--input", required=True)
    s.add_argument("--omega-max", type=float, default=20.0)
    s.add_argument("--n-omega", type=int, default=401)
    s.add_argument("--segment-length", type=float)
    s.add_argument("--sample-step", type=float)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_psd)

    i = sub.add_parser("interferogram", help="zero-crossing interferogram of a waveform file")
    i.add_argument("--input", required=True)
    i.add_argument("--max-lag", type=float, default=2.0)
    i.add_argument("--lag-step", type=float, default=0.05)
    i.add_argument("--max-crossings", type=int)
    i.add_argument("-o", "--output", required=True)
    i.set_defaults(func=cmd_interferogram)

    r = sub.add_parser("analytic", help="closed-form reference curve")
    r.add_argument("--curve", required=True, choices=sorted(ANALYTIC_CURVES))
    r.add_argument("--n0", type=float, default=1.0)
    r.add_argument("--tc", type=float, default=1.0)
    r.add_argument("--alpha", type=float, default=0.5)
    r.add_argument("--chip-kind", choices=("uniform", "raised_cosine"), default="uniform")
    r.add_argument("--x-min", type=float, default=0.0)
    r.add_argument("--x-max", type=float, default=2.5)
    r.add_argument("--n-points", type=int, default=251)
    r.add_argument("-o", "--output", required=True)
    r.set_defaults(func=cmd_analytic)

    f = sub.add_parser("reproduce-figure", help="CSV bundle for one figure")
    f.add_argument("--fig", type=int, required=True)
    f.add_argument("--outdir", default=".")
    f.add_argument("--seed", type=int, default=0)
    f.set_defaults(func=cmd_reproduce_figure)

    v = sub.add_parser("verify", help=f"run a check suite (tolerances v{TOLERANCE_VERSION})")
    v.add_argument("--suite", required=True, choices=["all", *SUITES, *SUITE_ALIASES])
    v.add_argument("--alpha", type=float)
    v.add_argument("--chips", type=float)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"impulsewave {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
