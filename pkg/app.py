"""
RFDE Solver - command-line entry point

    python app.py solve configs/constant_lag.json -o out/constant_lag.csv
"""

import sys

from modules.rfde.main import run

if __name__ == "__main__":
    sys.exit(run())
