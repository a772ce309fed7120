#!/usr/bin/env python3
"""Generate the two bound-surface CSVs (lambda panel and zeta panel).

Output lands in results/ by default; feed the CSVs to the frontend renderer
for the surface plots.
"""

import argparse
import pathlib
import sys

from zenolab.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for panel in ("left", "right"):
        code = cli_main(
            ["sweep", "--panel", panel, "--out", str(outdir / f"surface_{panel}.csv")]
        )
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
