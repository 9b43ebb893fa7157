#!/usr/bin/env python3
"""Build the per-width table of crossover observables.

For each width: critical time, normalized peak position, center-to-peak
height ratio, tail-width exponent gamma, and the two decay exponents.
Thin driver over the characteristics subcommand, so the CSV/JSON formats
match the CLI exactly.

    python scripts/characteristics_table.py --out out/table --steps 2000 \
        --widths 2 3 5 10 --workers 4
"""

from __future__ import annotations

import argparse
from pathlib import Path

from stripewalk.cli import RunConfig, cmd_characteristics


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=2000)
    parser.add_argument("--widths", type=int, nargs="*", default=[2, 3, 5, 10])
    parser.add_argument("--out", default="out/table")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = RunConfig(steps=args.steps, mlist=tuple(args.widths))
    rc = cmd_characteristics(cfg, out, workers=args.workers)
    print((out / "characteristics.csv").read_text())
    return rc


if __name__ == "__main__":
    raise SystemExit(main())
