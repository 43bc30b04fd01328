"""Write the CSV bundle of every data figure into one directory."""

import argparse
from pathlib import Path

from impulsewave.cli import FIGURES, reproduce_figure


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--outdir", default="figures")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    for fig in FIGURES:
        paths = reproduce_figure(fig, Path(args.outdir), args.seed)
        print(f"figure {fig}: {len(paths)} files")


if __name__ == "__main__":
    main()
