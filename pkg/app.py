"""
Symmetric Martingale Bounds command-line application.

Computes tightened exponential tail bounds for conditionally symmetric
martingales, compares them with the classical bounds, and checks them against
Monte Carlo simulation and exact lattice dynamic programs.

Usage:
    python app.py compute --theorem 1 --gamma 0.5 --delta 0.5 --n 100
    python app.py compare --gamma 0.5 --delta-grid 0:1:0.05 --out exponents.csv
    python app.py simulate --construction extremal --gamma 0.5 --n 10 --alpha 0.3 --trials 100000 --seed 7
    python app.py verify-optimality --gamma 0.5 --delta 0.4 --n-list 250,500,1000,2000
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
