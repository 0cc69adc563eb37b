#!/usr/bin/env python3
"""Emit class-structure transformation curves for a range of channel counts.

For each N, evaluates every feasible single-shot error rate q = k/N and
writes one CSV per N (q, raw incorrect/correct ratio, dissimilar/similar
pair ratio).  Plot tdgs_ratio against raw_ratio to see how pairing pushes
low error rates toward a balanced class structure.
"""

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from tdgs.class_structure import curve_csv_lines, transformation_curve


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--channels", default="4,6,8,11,16",
                    help="comma list of channel counts")
    ap.add_argument("--out-dir", default="curves", help="output directory")
    args = ap.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for n in (int(x) for x in args.channels.split(",")):
        grid = [Fraction(k, n) for k in range(n + 1)]
        points = transformation_curve(n, grid)
        path = out_dir / f"curve_n{n}.csv"
        path.write_text("\n".join(curve_csv_lines(points)) + "\n")
        print(f"wrote {path}: {len(points)} points")
    return 0


if __name__ == "__main__":
    sys.exit(main())
