"""Monte Carlo sweep over the chip-modulation depth.

For each alpha: sup error of the exact acf against the model curve, the
zero-frequency spectral level against 1 + alpha^2/3, and the crossing rate.
"""

import argparse

import numpy as np

from impulsewave import analytic as an
from impulsewave.analysis import acf_exact, crossing_rate, psd_estimate, sup_error, write_csv
from impulsewave.core import ChipDistribution, RandomSource
from impulsewave.generators import gen_bernoulli


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--chips", type=float, default=2e5)
    p.add_argument("--n-alpha", type=int, default=11)
    p.add_argument("--kind", choices=("uniform", "raised_cosine"), default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default="alpha_sweep.csv")
    args = p.parse_args()

    lags = np.linspace(0.0, 2.5, 126)
    rows = {k: [] for k in ("alpha", "acf_sup_error", "psd0", "psd0_target", "rate")}
    for i, a in enumerate(np.linspace(0.0, 1.0, args.n_alpha)):
        d = ChipDistribution("degenerate" if a == 0 else args.kind, 1.0, float(a))
        w = gen_bernoulli(d, args.chips, RandomSource(args.seed, i))
        err = sup_error(acf_exact(w, lags).values, an.acf_from_cdf(d, lags))
        psd0 = float(psd_estimate(w, [0.0], segment_length=128.0).values[0])
        for k, v in zip(rows, (a, err, psd0, 1 + d.variance, crossing_rate(w))):
            rows[k].append(v)
        print(f"alpha={a:.2f}  sup err={err:.4f}  S(0)={psd0:.4f} (target {1 + d.variance:.4f})  rate={rows['rate'][-1]:.4f}")
    write_csv(args.output, {k: np.array(v) for k, v in rows.items()}, [f"kind = {args.kind}", f"chips = {args.chips:g}"])


if __name__ == "__main__":
    main()
