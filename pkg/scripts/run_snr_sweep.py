#!/usr/bin/env python3
"""Run the default SNR sweep for all three autoencoder variants plus the
classical baselines and write the CSV + plot data under results/snr/."""
import sys
from pathlib import Path

from radden.cli import main

CONFIG = Path(__file__).resolve().parents[1] / "configs" / "snr_sweep.ini"

if __name__ == "__main__":
    code = main(["sweep", "--config", str(CONFIG), *sys.argv[1:]])
    if code == 0:
        out = Path("results/snr/sweep.csv")
        code = main(["report", str(out), "--out", "results/snr/plots",
                     "--axis", "snr"])
    sys.exit(code)
