"""Cauchy D / M_1 along growing v/s: the ratio keeps increasing, so no
constant bounds the relative entropy by the mixed information.

    python scripts/lsi_ratio.py
"""

import numpy as np

from stableinfo.info import relative_entropy_cauchy_closed
from stableinfo.mfi import lsi_ratio_cauchy, mfi_cauchy_closed


def main():
    print(f"{'v/s':>10} {'D':>12} {'M_1':>12} {'D/M_1':>10}")
    for r in np.logspace(0.25, 6, 24):
        print(f"{r:10.3g} {relative_entropy_cauchy_closed(r, 1.0):12.6f} "
              f"{mfi_cauchy_closed(r, 1.0):12.6f} {lsi_ratio_cauchy(r, 1.0):10.4f}")


if __name__ == "__main__":
    main()
