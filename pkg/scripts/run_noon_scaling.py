#!/usr/bin/env python3
"""Gap-vs-atom-number table for the NOON regime (preset fig4).

Closed form vs chain numerics for N = 2..8; pass --with-ed to add the full
diagonalization column for N <= 5 (minutes).
"""

import sys

from ringflow.cli import main

if __name__ == "__main__":
    sys.exit(main(["noon", *sys.argv[1:]]))
