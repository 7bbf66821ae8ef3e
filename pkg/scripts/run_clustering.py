#!/usr/bin/env python3
"""Reproduce the two-population changepoint clustering sweep (ARI vs n)."""
from __future__ import annotations

import argparse
from pathlib import Path

from mirrorclust.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", default="20,30,40,80,120,200")
    parser.add_argument("--replicates", type=int, default=100)
    parser.add_argument("--seed", type=int, default=20250808)
    parser.add_argument("--threads", default=None)
    parser.add_argument("--out", type=Path, default=Path("results/clustering"))
    args = parser.parse_args()

    argv = [
        "experiment", "clustering", "--grid", args.grid,
        "--replicates", str(args.replicates), "--seed", str(args.seed),
        "--out", str(args.out),
    ]
    if args.threads is not None:
        argv += ["--threads", str(args.threads)]
    return cli_main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
