#!/usr/bin/env python3
"""Reproduce the mirror estimation error sweeps (error vs n, error vs T).

Writes one report.json + curve.csv pair per sweep under --out.
"""
from __future__ import annotations

import argparse
from pathlib import Path

from mirrorclust.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--replicates", type=int, default=100)
    parser.add_argument("--seed", type=int, default=20250808)
    parser.add_argument("--threads", default=None)
    parser.add_argument("--out", type=Path, default=Path("results/mirror-error"))
    args = parser.parse_args()

    common = ["--replicates", str(args.replicates), "--seed", str(args.seed)]
    if args.threads is not None:
        common += ["--threads", str(args.threads)]
    for vary, fixed in (("n", ["--T", "10"]), ("T", ["--n", "100"])):
        out = args.out / f"vary-{vary}"
        code = cli_main(
            ["experiment", "mirror-error", "--vary", vary, *fixed, *common, "--out", str(out)]
        )
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
