#!/usr/bin/env python3
"""End-to-end demo: synthesize, analyze, train, evaluate, clean.

Runs the whole pipeline through the CLI entry points in a working directory,
printing each command's output.  Artifacts: train/validation datasets, pair
CSV, model JSON, evaluation report, cleaned dataset.
"""

import argparse
import sys
from pathlib import Path

from tdgs.cli import main as tdgs_main


def run(*argv):
    print(f"$ tdgs {' '.join(argv)}")
    code = tdgs_main(list(argv))
    if code != 0:
        raise SystemExit(code)
    print()


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--work-dir", default="demo_run")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    d = Path(args.work_dir)
    d.mkdir(parents=True, exist_ok=True)
    train_data = d / "train.json"
    val_data = d / "validation.json"
    model = d / "model.json"

    run("synth", "--out", str(train_data), "--seed", str(args.seed))
    run("analyze", "--data", str(train_data))
    run("pairs", "--data", str(train_data), "--out", str(d / "pairs.csv"))
    run("train", "--data", str(train_data), "--model-out", str(model))
    run("synth", "--out", str(val_data), "--shots", "12",
        "--faults", ",".join(["1"] * 12), "--seed", str(args.seed + 42))
    run("eval", "--data", str(val_data), "--model", str(model),
        "--report-out", str(d / "report.json"))
    run("clean", "--data", str(val_data), "--model", str(model),
        "--out", str(d / "cleaned.json"))
    print(f"artifacts in {d}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
