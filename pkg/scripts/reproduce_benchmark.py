#!/usr/bin/env python3
"""Rerun both reference transport scenarios and print the comparison.

Writes the two trace CSVs and the report into results/reproduction/.
Exits nonzero if any headline metric drifts outside 5% of its expected
value, so this doubles as a quick regression check:

    python scripts/reproduce_benchmark.py
"""
import sys

from cohesive_transport.cli import main

if __name__ == "__main__":
    sys.exit(main(["reproduce", "--out", "results/reproduction"]))
