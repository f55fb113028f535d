#!/usr/bin/env python3
"""Sweep attack durations across all three policies on the HVAC scenario.

Writes out/sweep/compare.csv with one row per (policy, attack duration); use
--equal-budget to normalise stored energy at the attack onset.  Extra CLI
arguments are passed straight through, e.g.:

    python scripts/sweep_attacks.py --attack-durations 30,300 --equal-budget
"""

import sys
from pathlib import Path

from eamsim.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    sys.exit(
        main(
            [
                "compare",
                "--config",
                str(ROOT / "configs" / "hvac_attack.yaml"),
                "--out",
                str(ROOT / "out" / "sweep"),
                "--set",
                "sim.timeline_stride=0",
                "--set",
                "sim.horizon_s=900",
                "--set",
                "trace.length_s=1000",
                *sys.argv[1:],
            ]
        )
    )
