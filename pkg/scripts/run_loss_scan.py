#!/usr/bin/env python3
"""Loss robustness vs atom number at fixed gamma (preset fig3a).

Sweeps N = 2..6 in the hard-core regime; the N=6 point drops to a 14-mode
window to stay at desk scale, matching the production convention.
"""

import sys

from ringflow.cli import main

if __name__ == "__main__":
    sys.exit(main(["sweep", "--figure", "fig3a", *sys.argv[1:]]))
