#!/usr/bin/env python3
"""Map reference-filter cutoff against peak deformation and speed.

Reruns the baseline transport for cutoffs 0.02..0.5 rad/s and writes
results/sweep/sweep.csv (columns omega_c, D_bar_cm, v_max_cmps). Slower
references keep the object flatter; the chosen 0.1 rad/s keeps peak
deformation under 7 cm and commanded speeds under 5 cm/s.

    python scripts/sweep_cutoff.py
"""
import sys
from pathlib import Path

from cohesive_transport.cli import main

CONFIG = Path(__file__).resolve().parent.parent / "configs" / "chain4_baseline.cfg"

if __name__ == "__main__":
    sys.exit(main(["sweep", "--config", str(CONFIG), "--out", "results/sweep"]))
