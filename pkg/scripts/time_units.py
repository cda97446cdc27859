"""Compare the write-phase peak time with a quoted pulse duration.

If a duration was computed with Gamma = 2 MHz in place of 2*pi*2 MHz,
it would be 2*pi times longer than the peak time computed here.
"""

import argparse
import math

from brillent.model import SystemParams
from brillent.propagator import write_peak


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quoted-ns", type=float, default=11.0)
    args = ap.parse_args()
    p = SystemParams.operating_point()
    t_pk, e_pk = write_peak(p)
    ratio = args.quoted_ns * 1e-9 / t_pk
    print(f"peak E_N {e_pk:.4f} at {t_pk * 1e9:.4f} ns")
    print(f"quoted/peak = {ratio:.4f}; 2*pi = {2 * math.pi:.4f}; "
          f"peak time x 2*pi = {t_pk * 2 * math.pi * 1e9:.3f} ns")


if __name__ == "__main__":
    main()
