#!/usr/bin/env python3
"""Run the bundled HVAC attack scenario and drop its reports under out/demo.

Equivalent to:

    eamsim run --config configs/hvac_attack.yaml --out out/demo
"""

import sys
from pathlib import Path

from eamsim.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    sys.exit(
        main(
            [
                "run",
                "--config",
                str(ROOT / "configs" / "hvac_attack.yaml"),
                "--out",
                str(ROOT / "out" / "demo"),
                *sys.argv[1:],
            ]
        )
    )
