#!/usr/bin/env python3
"""Run the label-mismatch robustness sweep (0..50% shuffled training labels)
and write the CSV + plot data under results/mismatch/."""
import sys
from pathlib import Path

from radden.cli import main

CONFIG = Path(__file__).resolve().parents[1] / "configs" / "mismatch_sweep.ini"

if __name__ == "__main__":
    code = main(["sweep", "--config", str(CONFIG), *sys.argv[1:]])
    if code == 0:
        out = Path("results/mismatch/sweep.csv")
        code = main(["report", str(out), "--out", "results/mismatch/plots",
                     "--axis", "mismatch"])
    sys.exit(code)
