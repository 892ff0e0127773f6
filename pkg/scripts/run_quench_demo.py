#!/usr/bin/env python3
"""Phase-quench demonstration: trace file plus the extracted oscillation
frequency compared against the solver's level splitting."""

import sys

from ringflow.cli import main

if __name__ == "__main__":
    sys.exit(main(["dynamics", *sys.argv[1:]]))
