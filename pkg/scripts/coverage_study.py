"""How often does a single 256-crossing Gaussian interferogram stay inside its own 95% band?

Runs many independent curves and reports the distribution of per-curve coverage
and the fraction of curves reaching a given coverage threshold.
"""

import argparse

import numpy as np

from impulsewave import analytic as an
from impulsewave.analysis import interferogram
from impulsewave.core import RandomSource
from impulsewave.generators import GaussianSpec, gen_hardlimited_gaussian


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--curves", type=int, default=150)
    p.add_argument("--n-c", type=int, default=256)
    p.add_argument("--threshold", type=float, default=0.90)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args()

    lags = np.linspace(-2.0, 2.0, 81)
    ref = an.interferogram_mean_gaussian(1.0, lags)
    spec = GaussianSpec("gaussian", 1.0)
    cov = np.empty(args.curves)
    for i in range(args.curves):
        w = gen_hardlimited_gaussian(spec, 2.0 * args.n_c + 10, RandomSource(args.seed, i))
        it = interferogram(w, lags, args.n_c)
        cov[i] = np.mean(np.abs(it.values - ref) <= it.ci95)
    print(f"mean coverage {cov.mean():.3f}, median {np.median(cov):.3f}, min {cov.min():.3f}")
    print(f"curves with coverage >= {args.threshold}: {np.mean(cov >= args.threshold):.3f}")
    pooled = [cov[i : i + 5].mean() for i in range(0, args.curves - 4, 5)]
    print(f"five-curve pooled coverage >= {args.threshold}: {np.mean(np.array(pooled) >= args.threshold):.3f}")


if __name__ == "__main__":
    main()
