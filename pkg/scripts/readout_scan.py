"""Peak readout entanglement over write duration and readout coupling.

Shows how the Stokes/anti-Stokes peak depends on tau1: a write pulse much
longer than the write-phase peak time lets heating erase the photon-phonon
correlation before readout starts.
"""

import argparse

import numpy as np

from brillent.analytic import readout_correlations
from brillent.model import ProtocolTimeline, SystemParams
from brillent.propagator import readout_peak, write_peak


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tau1-ns", type=float, nargs="+", default=None)
    ap.add_argument("--gt", type=float, nargs="+", default=[20, 30, 40, 50])
    ap.add_argument("--tau-d-ns", type=float, default=0.1)
    ap.add_argument("--tau2-ns", type=float, default=3.0)
    args = ap.parse_args()

    base = SystemParams.operating_point()
    t_pk = write_peak(base)[0]
    taus = args.tau1_ns or [0.5 * t_pk * 1e9, t_pk * 1e9, 2 * t_pk * 1e9, 4.0, 11.0]
    print(f"write-phase peak time {t_pk * 1e9:.4f} ns")
    print(f"{'tau1[ns]':>9} {'g~/Gamma':>9} {'n_s':>9} {'n_b':>9} {'C_ns':>9} "
          f"{'possible':>8} {'peak':>8} {'s_pk[ns]':>9}")
    for tau1 in taus:
        for gt in args.gt:
            p = SystemParams.operating_point(g_tilde_over_Gamma=gt)
            tl = ProtocolTimeline(tau1 * 1e-9, args.tau_d_ns * 1e-9, args.tau2_ns * 1e-9)
            c = readout_correlations(p, tl.tau1, tl.tau_d)
            s, e = readout_peak(p, tl)
            print(f"{tau1:9.4f} {gt:9g} {c.n_s:9.3f} {c.n_b:9.3f} {c.C_ns:9.3f} "
                  f"{str(c.readout_possible):>8} {e:8.4f} {s * 1e9:9.4f}")


if __name__ == "__main__":
    main()
