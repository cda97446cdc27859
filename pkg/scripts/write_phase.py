"""Write-phase E_N: exact curve against the cubic and rational approximants.

Prints the peak and the worst approximant deviation for several couplings and
optionally writes the curves as CSV.
"""

import argparse
import math

import numpy as np

from brillent.analytic import (covariance_entangle, en_max, lambda_minus_cubic,
                               lambda_minus_rational)
from brillent.gaussian import BlockDecomposition, log_negativity
from brillent.model import SystemParams
from brillent.propagator import default_write_window, write_peak


def en(lam):
    with np.errstate(divide="ignore"):
        return np.maximum(0.0, -np.log(2 * np.asarray(lam, float)))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=float, nargs="+", default=[10, 20, 30], help="g/Gamma values")
    ap.add_argument("--T", type=float, default=30.0)
    ap.add_argument("--n", type=int, default=801)
    ap.add_argument("--out", help="CSV path for the curves")
    args = ap.parse_args()

    rows = []
    print(f"{'g/Gamma':>8} {'n_th':>7} {'peak':>8} {'t_pk[ns]':>9} {'en_max':>8} "
          f"{'|rational|':>10} {'|cubic|':>8}")
    for gG in args.g:
        p = SystemParams.operating_point(g_over_Gamma=gG, T_m=args.T, delta_a_over_Gamma=0.0)
        ts = np.linspace(0, default_write_window(p), args.n)
        exact = np.array([log_negativity(BlockDecomposition.from_matrix(covariance_entangle(p, t)))
                          for t in ts])
        rat = en(lambda_minus_rational(p.g, p.Gamma, p.n_th, ts))
        cub = en(lambda_minus_cubic(p.g, p.Gamma, p.n_th, ts))
        w = exact > 0
        t_pk, e_pk = write_peak(p)
        try:
            em = en_max(p.g, p.Gamma, p.n_th)
        except ValueError:
            em = math.nan
        print(f"{gG:8g} {p.n_th:7.2f} {e_pk:8.4f} {t_pk * 1e9:9.4f} {em:8.4f} "
              f"{np.abs(rat - exact)[w].max():10.4f} {np.abs(cub - exact)[w].max():8.4f}")
        rows += [(gG, t, e, r, c) for t, e, r, c in zip(ts, exact, rat, cub)]
    if args.out:
        np.savetxt(args.out, np.array(rows), delimiter=",", comments="",
                   header="g_over_Gamma,t_s,E_N_exact,E_N_rational,E_N_cubic")


if __name__ == "__main__":
    main()
