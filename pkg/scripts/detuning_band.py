"""Peak write-phase E_N against Stokes detuning, relative to zero detuning."""

import argparse

import numpy as np

from brillent.model import SystemParams
from brillent.propagator import write_peak


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=float, default=30.0, help="g/Gamma")
    ap.add_argument("--ratios", type=float, nargs="+",
                    default=[0, 0.5, 1, 2, 4, 6, 8, 10, 12, 16], help="|Delta_a|/g values")
    args = ap.parse_args()
    e0 = write_peak(SystemParams.operating_point(g_over_Gamma=args.g, delta_a_over_Gamma=0.0))[1]
    print(f"{'Delta_a/g':>9} {'Delta_a/Gamma':>13} {'peak':>8} {'ratio':>7}")
    for r in args.ratios:
        p = SystemParams.operating_point(g_over_Gamma=args.g, delta_a_over_Gamma=r * args.g)
        e = write_peak(p)[1]
        print(f"{r:9g} {r * args.g:13g} {e:8.4f} {e / e0:7.3f}")
    print("ratio below 0.1 first at Delta_a/g ~",
          next((r for r in np.arange(0, 40, 0.5)
                if write_peak(SystemParams.operating_point(g_over_Gamma=args.g,
                                                 delta_a_over_Gamma=r * args.g))[1] < 0.1 * e0),
               "none below 40"))


if __name__ == "__main__":
    main()
