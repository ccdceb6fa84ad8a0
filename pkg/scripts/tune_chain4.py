#!/usr/bin/env python3
"""Tune both controllers on the four-robot chain for a 10 s settling
time and write the gain tables.

Outputs in results/tuning/: tuning.json with the selected gains,
ts_vs_gamma.csv (settling estimate across the stable baseline range),
and dsr_gains_vs_ts.csv (cohesive gains across settling targets).

    python scripts/tune_chain4.py [target_ts_seconds]
"""
import sys
from pathlib import Path

from cohesive_transport.cli import main

CONFIG = Path(__file__).resolve().parent.parent / "configs" / "chain4_baseline.cfg"

if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "10.0"
    sys.exit(main(["tune", "--config", str(CONFIG), "--target-ts", target,
                   "--out", "results/tuning"]))
