#!/usr/bin/env python3
"""Run the default [[4,2,2]] protection experiment and compare with the bounds.

Writes simulate.csv (+ manifest) to results/; the convergence plot in the
frontend consumes this file.
"""

import argparse
import pathlib
import sys

from zenolab.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return cli_main(
        [
            "simulate",
            "--seed", str(args.seed),
            "--out", str(outdir / "simulate.csv"),
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
