#!/usr/bin/env python3
"""
qcg3 - Application Entry Point

Builds, verifies and exports Clebsch-Gordan tables of U_q(sl3) for the
tensor product of two symmetric irreps.

Usage:
    python run.py table --n1 1 --n2 1
    python run.py verify --n1 2 --n2 2
    python run.py su2 --j1 1/2 --j2 1/2 --m1 1/2 --m2=-1/2 --j 0 --m 0
    python run.py weights --n 5 --m 2
"""

import sys
import os

# Add the project root to the path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.main import main


if __name__ == "__main__":
    sys.exit(main())
