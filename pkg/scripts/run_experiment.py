#!/usr/bin/env python3
"""
UAV-to-UAV Underlay Coverage Experiments

Thin launcher around the ``u2u-coverage`` command for running straight from a
checkout. Defaults to the analytic engine with the reference urban scenario.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from u2u_underlay.experiments.cli import main

if __name__ == "__main__":
    sys.exit(main())
