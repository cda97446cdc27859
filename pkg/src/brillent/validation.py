"""Consistency checks between the closed-form, ODE and Monte-Carlo paths."""

from __future__ import annotations

import math

import numpy as np

from .analytic import (READOUT, WRITE, covariance_entangle, mode_coefficients,
                       readout_correlations, readout_covariance_since_start)
from .config import RunConfig
from .gaussian import extract_pair, symplectic_spectrum
from .model import (ProtocolTimeline, SystemParams, antistokes_drift_diffusion,
                    stokes_drift_diffusion)
from .propagator import (default_mc_step, embed_readout, initial_state, lyapunov_propagate,
                         mc_oracle, run_protocol, write_peak, Sampling)

#: entries below this fraction of sqrt(V_ii V_jj) count as structural zeros
ZERO_FLOOR = 1e-6


def elementwise_relative_error(V, ref) -> float:
    """``max |V - ref| / |ref|`` with a tiny floor for entries that vanish exactly."""
    V, ref = np.asarray(V, float), np.asarray(ref, float)
    d = np.sqrt(np.abs(np.outer(np.diag(ref), np.diag(ref))))
    denom = np.maximum(np.abs(ref), ZERO_FLOOR * d)
    return float(np.max(np.abs(V - ref) / denom))


def min_symplectic_margin(V) -> float:
    """``(min ν - 1/2) / max(1, max ν)``; non-negative for valid states up to round-off."""
    nu = symplectic_spectrum(V)
    return float((nu.min() - 0.5) / max(1.0, nu.max()))


def mc_z_scores(dd, V0, t, n_traj, seed, h, rate) -> float:
    est, se = mc_oracle(dd, V0, t, n_traj, seed, h=h)
    ref = lyapunov_propagate(dd, V0, (0.0, t), [t], rate=rate)[0]
    iu = np.triu_indices(V0.shape[0])
    return float(np.max(np.abs(est - ref)[iu] / np.maximum(se[iu], 1e-300)))


def random_write_params(rng, Gamma=2 * math.pi * 2e6) -> tuple[SystemParams, float]:
    p = SystemParams.operating_point(g_over_Gamma=rng.uniform(1, 50),
                           delta_a_over_Gamma=rng.uniform(0, 0.5),
                           T_m=float(rng.choice([30.0, 300.0])),
                           gamma=rng.uniform(0.01, 0.1) * Gamma)
    return p, rng.uniform(0, 2 / Gamma)


def _check(name, measured, bound, kind="max"):
    ok = measured <= bound if kind == "max" else measured >= bound
    return {"name": name, "measured": measured, "bound": bound, "kind": kind,
            "passed": bool(ok and not math.isnan(measured))}


def run_checks(cfg: RunConfig, n_traj: int = 20000) -> dict:
    checks = []
    rng = np.random.default_rng(12345)
    worst = 0.0
    for _ in range(10):
        p, t = random_write_params(rng)
        V = lyapunov_propagate(stokes_drift_diffusion(p), initial_state(p), (0, t), [t],
                               rtol=cfg.rtol, atol=cfg.atol, rate=p.Gamma)[0]
        worst = max(worst, elementwise_relative_error(V, covariance_entangle(p, t)))
    checks.append(_check("write: lyapunov vs closed form (relative)", worst, 1e-6))

    p = cfg.params()
    ident = 0.0
    for variant in (WRITE, READOUT):
        c = mode_coefficients(p, variant)
        ident = max(ident, abs(c.mu2 - c.mu3 - 1))
    checks.append(_check("mode coefficients: |mu2 - mu3 - 1|", float(ident), 1e-12))

    tau1 = cfg.tau1_s if cfg.tau1_s is not None else write_peak(p)[0]
    tl = ProtocolTimeline(tau1, cfg.tau_d_s, cfg.tau2_s)
    tr = run_protocol(p, tl, Sampling(60, 6, 60), rtol=cfg.rtol, atol=cfg.atol)
    corr = readout_correlations(p, tl.tau1, tl.tau_d)
    i0 = int(np.searchsorted(tr.times, tl.readout_start - 1e-18))
    V = tr.covariances[i0]
    delay_err = max(abs(V[0, 0] - 0.5 - corr.n_s) / max(corr.n_s, 1e-300),
                    abs(V[2, 2] - 0.5 - corr.n_b) / corr.n_b,
                    abs(2 * V[0, 3] - corr.C_ns) / max(abs(corr.C_ns), 1e-300))
    checks.append(_check("delay: readout-start moments vs closed form (relative)",
                         float(delay_err), 1e-6))
    worst = 0.0
    for k in range(i0 + 1, len(tr.times), 3):
        ref = readout_covariance_since_start(p, corr, tr.times[k] - tl.readout_start).matrix()
        worst = max(worst, elementwise_relative_error(extract_pair(tr.covariances[k], 0, 2).matrix(), ref))
    checks.append(_check("readout: lyapunov (a, ã) vs closed form (relative)", worst, 1e-5))
    margin = min(min_symplectic_margin(V) for V in tr.covariances)
    checks.append(_check("protocol: min symplectic eigenvalue margin", margin, -1e-9, "min"))

    G = p.Gamma
    pw = p.with_(g=10 * G)
    z = mc_z_scores(stokes_drift_diffusion(pw), initial_state(pw), 0.5 / G, n_traj,
                    cfg.seed, default_mc_step(pw), G)
    checks.append(_check("monte carlo: write g/Gamma=10, t=0.5/Gamma (max z)", z, 4.0))
    pr = p.with_(g=10 * G, g_tilde=20 * G)
    V0 = embed_readout(covariance_entangle(pr, 0.2 / G))
    z = mc_z_scores(antistokes_drift_diffusion(pr, 3), V0, math.pi / (4 * pr.g_tilde), n_traj,
                    cfg.seed + 1, default_mc_step(pr), G)
    checks.append(_check("monte carlo: readout g~/Gamma=20, t=pi/(4g~) (max z)", z, 4.0))

    return {"passed": all(c["passed"] for c in checks), "seed": cfg.seed,
            "n_traj": n_traj, "checks": checks}
