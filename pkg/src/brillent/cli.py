"""Command-line front end: ``brillent {entangle,sweep-temp,sweep-k,readout,validate}``."""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import (DegenerateRoots, HeatingDominates, en_max, lambda_minus_cubic,
                       lambda_minus_rational, lambda_tilde_minus_cubic,
                       lambda_tilde_minus_poly, readout_correlations)
from .config import ConfigError, RunConfig, load_config
from .gaussian import extract_pair, lambda_minus
from .propagator import (RNG_ALGORITHM, Sampling, StepSizeUnderflow, default_write_window,
                         initial_state, lyapunov_propagate, run_protocol, write_peak)
from .model import stokes_drift_diffusion

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VALIDATION = 0, 2, 3, 4


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    return f"{float(x):.16e}"


def _en(lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    with np.errstate(divide="ignore"):
        return np.maximum(0.0, -np.log(2 * lam))


class CsvWriter:
    """Metadata lines, a header row, data rows, then trailing summary lines."""

    def __init__(self, path, command: str, cfg: RunConfig, reproducible: bool):
        self.path = path
        self.lines = [f"# brillent {__version__}", f"# command {command}"]
        if not reproducible:
            stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
            self.lines.append(f"# generated {stamp}")
        self.lines.append(f"# rng {RNG_ALGORITHM}")
        self.lines += [f"# config {k} = {v}" for k, v in cfg.header_items()]

    def header(self, cols):
        self.lines.append(",".join(cols))

    def row(self, values):
        self.lines.append(",".join(fmt(v) for v in values))

    def summary(self, **items):
        self.lines.append("# summary " + " ".join(f"{k}={fmt(v)}" for k, v in items.items()))

    def close(self):
        text = "\n".join(self.lines) + "\n"
        if self.path is None:
            sys.stdout.write(text)
        else:
            Path(self.path).write_text(text, encoding="utf-8")


def _out_path(base, suffix: str | None):
    if base is None or suffix is None:
        return base
    p = Path(base)
    return p.with_name(f"{p.stem}_{suffix}{p.suffix}")


def _map(fn, items, workers):
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(fn, items))  # results come back in input order
    return [fn(x) for x in items]


# --- entangle -------------------------------------------------------------------------

ENTANGLE_COLS = ["t_s", "E_N_exact", "E_N_cubic", "E_N_rational", "lambda_minus",
                 "V11", "V33", "V14", "V13", "n_b"]


def cmd_entangle(cfg: RunConfig, args) -> int:
    multi = len(cfg.g_over_Gamma) > 1
    for gG in cfg.g_over_Gamma:
        p = cfg.params(gG)
        t_max = cfg.tau1_s if cfg.tau1_s is not None else default_write_window(p)
        ts = np.linspace(0.0, t_max, cfg.samples + 1)
        Vs = lyapunov_propagate(stokes_drift_diffusion(p), initial_state(p), (0.0, t_max), ts,
                                rtol=cfg.rtol, atol=cfg.atol, rate=p.Gamma)
        lam = np.array([lambda_minus(extract_pair(V, 0, 1)) for V in Vs])
        cubic = _en(lambda_minus_cubic(p.g, p.Gamma, p.n_th, ts))
        rational = _en(lambda_minus_rational(p.g, p.Gamma, p.n_th, ts)) if p.g > 0 \
            else np.full_like(ts, np.nan)
        w = CsvWriter(_out_path(args.out, f"g{gG:g}" if multi else None), "entangle", cfg,
                      args.reproducible)
        w.header(ENTANGLE_COLS)
        for t, V, l, c, r in zip(ts, Vs, lam, cubic, rational):
            w.row([t, _en(l), c, r, l, V[0, 0], V[2, 2], V[0, 3], V[0, 2],
                   (V[2, 2] + V[3, 3] - 1) / 2])
        t_pk, e_pk = write_peak(p, t_max=t_max, n=cfg.samples)
        try:
            em = en_max(p.g, p.Gamma, p.n_th)
        except HeatingDominates:
            em = math.nan
        w.summary(g_over_Gamma=gG, peak_E_N=e_pk, peak_time_s=t_pk, en_max=em)
        w.close()
        print(f"g/Gamma={gG:g}: peak E_N={e_pk:.6g} at t={t_pk:.6g} s, en_max={em:.6g}",
              file=sys.stderr)
    return EXIT_OK


# --- sweeps ---------------------------------------------------------------------------

def _sweep_axis(cfg: RunConfig, expected) -> str:
    if cfg.sweep_var not in expected:
        raise ConfigError(f"sweep_var must be one of {expected}, got {cfg.sweep_var!r}")
    return cfg.sweep_var


def cmd_sweep_temp(cfg: RunConfig, args) -> int:
    _sweep_axis(cfg, ("T_m_K",))
    values = cfg.sweep_values()

    def point(T):
        p = cfg.with_value("T_m_K", float(T)).params()
        t_pk, e_pk = write_peak(p, t_max=cfg.tau1_s, n=cfg.samples)
        return T, p.n_th, e_pk, t_pk

    rows = _map(point, values, args.workers)
    w = CsvWriter(args.out, "sweep-temp", cfg, args.reproducible)
    w.header(["T_m", "n_th", "peak_E_N", "peak_time"])
    for r in rows:
        w.row(r)
    peaks = [r[2] for r in rows]
    mono = all(b <= a + 1e-12 for a, b in zip(peaks, peaks[1:]))
    w.summary(nonincreasing=str(mono).lower())
    if not mono:
        print("warning: peak E_N is not nonincreasing in T_m", file=sys.stderr)
    w.close()
    return EXIT_OK


def cmd_sweep_k(cfg: RunConfig, args) -> int:
    axis = _sweep_axis(cfg, ("k_per_m", "delta_a_over_Gamma"))
    values = cfg.sweep_values()

    def point(x):
        p = cfg.with_value(axis, float(x)).params()
        t_pk, e_pk = write_peak(p, t_max=cfg.tau1_s, n=cfg.samples)
        return p.k, p.delta_a, p.delta_b, p.delta_a / p.Gamma, e_pk, t_pk

    rows = _map(point, values, args.workers)
    w = CsvWriter(args.out, "sweep-k", cfg, args.reproducible)
    w.header(["k", "delta_a", "delta_b", "delta_a_over_Gamma", "peak_E_N", "peak_time"])
    for r in rows:
        w.row(r)
    w.close()
    return EXIT_OK


# --- readout --------------------------------------------------------------------------

READOUT_COLS = ["t_s", "phase", "E_N_ab", "E_N_a_atilde", "E_N_tilde_cubic",
                "E_N_tilde_poly", "N_as", "n_b"]


def cmd_readout(cfg: RunConfig, args) -> int:
    p = cfg.params()
    tau1 = cfg.tau1_s if cfg.tau1_s is not None else write_peak(p)[0]
    tl = cfg.timeline(tau1)
    n = cfg.samples
    tr = run_protocol(p, tl, Sampling(n, max(1, n // 20), n), rtol=cfg.rtol, atol=cfg.atol)
    corr = readout_correlations(p, tl.tau1, tl.tau_d)
    w = CsvWriter(args.out, "readout", cfg, args.reproducible)
    w.header(READOUT_COLS)
    for k, t in enumerate(tr.times):
        if tr.phases[k] == "readout":
            s = t - tl.readout_start
            cub = _en(lambda_tilde_minus_cubic(p.g_tilde, p.Gamma, p.n_th, corr, s))
            pol = _en(lambda_tilde_minus_poly(p.g_tilde, p.Gamma, p.n_th, corr, s))
        else:
            cub = pol = math.nan
        w.row([t, tr.phases[k], tr.E_N[k], tr.E_N_tilde[k], cub, pol, tr.N_as[k], tr.n_b[k]])
    i = int(np.argmax(tr.E_N_tilde))
    w.summary(peak_E_N_tilde=tr.E_N_tilde[i], peak_time_s=tr.times[i],
              peak_E_N_write=float(np.max(tr.E_N)), tau1_s=tl.tau1)
    w.close()
    print(f"peak E_N~={tr.E_N_tilde[i]:.6g} at t={tr.times[i]:.6g} s", file=sys.stderr)
    return EXIT_OK


# --- validate -------------------------------------------------------------------------

def cmd_validate(cfg: RunConfig, args) -> int:
    from .validation import run_checks

    report = run_checks(cfg, n_traj=args.n_traj)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out is None:
        print(text)
    else:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    return EXIT_OK if report["passed"] else EXIT_VALIDATION


COMMANDS = {
    "entangle": cmd_entangle,
    "sweep-temp": cmd_sweep_temp,
    "sweep-k": cmd_sweep_k,
    "readout": cmd_readout,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="brillent", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, metavar="PATH")
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--reproducible", action="store_true",
                        help="omit the timestamp header line")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--rtol", type=float)
        sp.add_argument("--samples", type=int)
        sp.add_argument("--workers", type=int, default=1)
        if name == "validate":
            sp.add_argument("--n-traj", type=int, default=20000)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        for key in ("seed", "rtol", "samples"):
            val = getattr(args, key)
            if val is not None:
                cfg = cfg.with_value(key, val)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (StepSizeUnderflow, DegenerateRoots, FloatingPointError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
