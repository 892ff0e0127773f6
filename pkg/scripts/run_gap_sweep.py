#!/usr/bin/env python3
"""Regenerate the splitting-vs-interaction scan (presets fig2/fig3).

The same CSV carries the splitting, the momentum-superposition diagnostics,
and the loss-robustness column, so it feeds both figure styles.
"""

import sys

from ringflow.cli import main

if __name__ == "__main__":
    figure = sys.argv[1] if len(sys.argv) > 1 else "fig2"
    sys.exit(main(["sweep", "--figure", figure]))
