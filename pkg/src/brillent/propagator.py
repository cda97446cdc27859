"""Numerical engines: Lyapunov integration, the three-phase protocol, and a Monte-Carlo oracle."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import minimize_scalar

from .gaussian import extract_pair, lambda_minus, log_negativity, thermal, vacuum, direct_sum
from .model import (DriftDiffusion, ProtocolTimeline, SystemParams,
                    antistokes_drift_diffusion, delay_drift_diffusion, stokes_drift_diffusion)

__all__ = [
    "ProtocolTimeline", "Sampling", "Trajectory", "StepSizeUnderflow", "RNG_ALGORITHM",
    "lyapunov_propagate", "run_protocol", "initial_state", "write_peak", "readout_peak",
    "mc_oracle", "euler_maruyama_step", "default_mc_step", "embed_readout", "default_write_window", "Sampling",
]

RTOL = 1e-10
ATOL = 1e-12
RNG_ALGORITHM = "numpy Philox4x64-10, SeedSequence(seed, spawn_key=(block,))"
MC_BLOCK = 1000

WRITE, DELAY, READOUT = "write", "delay", "readout"


class StepSizeUnderflow(ArithmeticError):
    """The adaptive integrator could not meet the requested tolerance."""


def _rate_scale(dd: DriftDiffusion) -> float:
    s = float(np.max(np.abs(np.diag(dd.A)))) if dd.A.size else 0.0
    if s == 0 and dd.A.size:
        s = float(np.max(np.abs(dd.A)))
    return s if s > 0 else 1.0


def lyapunov_propagate(dd: DriftDiffusion, V0, t_span, sample_times, *, rtol: float = RTOL,
                       atol: float = ATOL, rate: float | None = None) -> list[np.ndarray]:
    """Integrate ``dV/dt = A V + V A^T + D`` and return ``V`` at ``sample_times``.

    Time is rescaled by ``rate`` (default: the largest damping on the drift
    diagonal) before integrating.  Only the upper triangle is evolved.
    """
    V0 = np.asarray(V0, dtype=float)
    n = V0.shape[0]
    if dd.A.shape != (n, n):
        raise ValueError(f"drift is {dd.A.shape}, state is {V0.shape}")
    t0, t1 = map(float, t_span)
    ts = np.asarray(sample_times, dtype=float)
    if ts.size and (np.any(np.diff(ts) < 0) or ts[0] < t0 or ts[-1] > t1):
        raise ValueError("sample_times must be sorted and lie inside t_span")
    rate = _rate_scale(dd) if rate is None else rate
    A, D = dd.A / rate, dd.D / rate
    # integrate W = e^{-2κt} V, with κ the largest growth rate, so that
    # amplified states stay O(1) and atol keeps its meaning
    kappa = max(0.0, float(np.max(np.linalg.eigvals(A).real)))
    Ak = A - kappa * np.eye(n)
    tau0 = t0 * rate
    iu = np.triu_indices(n)

    def unpack(y):
        V = np.empty((n, n))
        V[iu] = y
        V.T[iu] = y
        return V

    def rhs(tau, y):
        W = unpack(y)
        AW = Ak @ W
        return (AW + AW.T + D * math.exp(-2 * kappa * (tau - tau0)))[iu]

    V0s = 0.5 * (V0 + V0.T)
    if t1 == t0:
        return [V0s.copy() for _ in ts]
    sol = solve_ivp(rhs, (t0 * rate, t1 * rate), V0s[iu], method="DOP853",
                    t_eval=ts * rate, rtol=rtol, atol=atol)
    if sol.status != 0:
        raise StepSizeUnderflow(sol.message)
    return [unpack(y) * math.exp(2 * kappa * (tau - tau0)) for tau, y in zip(sol.t, sol.y.T)]


def initial_state(params: SystemParams) -> np.ndarray:
    """Stokes vacuum times a thermal phonon at the bath occupancy."""
    return direct_sum(vacuum(1), thermal(params.n_th))


def embed_readout(V_ab) -> np.ndarray:
    """Append a vacuum anti-Stokes mode: ``(a, b) -> (a, b, ã)``."""
    return direct_sum(np.asarray(V_ab, dtype=float), vacuum(1))


@dataclass(frozen=True)
class Sampling:
    """Number of sample intervals in each phase."""

    write: int = 200
    delay: int = 10
    readout: int = 200

    def __post_init__(self):
        if min(self.write, self.delay, self.readout) < 1:
            raise ValueError("each phase needs at least one sample interval")

    @classmethod
    def uniform(cls, n: int) -> "Sampling":
        return cls(n, max(1, n // 20), n)


@dataclass
class Trajectory:
    times: np.ndarray
    covariances: list
    phases: list
    E_N: np.ndarray = field(init=False)
    E_N_tilde: np.ndarray = field(init=False)
    N_as: np.ndarray = field(init=False)
    n_b: np.ndarray = field(init=False)

    def __post_init__(self):
        en, ent, nas, nb = [], [], [], []
        for V in self.covariances:
            en.append(log_negativity(extract_pair(V, 0, 1)))
            nb.append((V[2, 2] + V[3, 3] - 1) / 2)
            if V.shape[0] == 6:
                ent.append(log_negativity(extract_pair(V, 0, 2)))
                nas.append((V[4, 4] + V[5, 5] - 1) / 2)
            else:
                ent.append(0.0)
                nas.append(0.0)
        self.E_N, self.E_N_tilde = np.array(en), np.array(ent)
        self.N_as, self.n_b = np.array(nas), np.array(nb)

    def phase_mask(self, phase: str) -> np.ndarray:
        return np.array([p == phase for p in self.phases])


def run_protocol(params: SystemParams, timeline: ProtocolTimeline,
                 sampling: Sampling | None = None, *, rtol: float = RTOL,
                 atol: float = ATOL) -> Trajectory:
    """Write, delay and readout phases, each starting from the previous end state.

    Sample times are strictly increasing: each phase boundary is stored once,
    as the last sample of the phase that ends there.
    """
    sampling = sampling or Sampling()
    rate = params.Gamma if params.Gamma > 0 else max(params.g, params.g_tilde, params.gamma) or None
    kw = dict(rtol=rtol, atol=atol, rate=rate)
    t1, td, t2 = timeline.tau1, timeline.tau_d, timeline.tau2
    times, covs, phases = [0.0], [initial_state(params)], [WRITE]

    def run(dd, V0, start, length, n, label):
        if length <= 0:
            return V0
        ts = start + length * np.arange(1, n + 1) / n
        ts[-1] = start + length
        out = lyapunov_propagate(dd, V0, (start, start + length), ts, **kw)
        times.extend(ts)
        covs.extend(out)
        phases.extend([label] * n)
        return out[-1]

    V = run(stokes_drift_diffusion(params), covs[0], 0.0, t1, sampling.write, WRITE)
    V = run(delay_drift_diffusion(params), V, t1, td, sampling.delay, DELAY)
    run(antistokes_drift_diffusion(params, 3), embed_readout(V), t1 + td, t2,
        sampling.readout, READOUT)
    return Trajectory(np.array(times), covs, phases)


def _refine_peak(f, grid, values):
    """Grid argmax of ``f`` followed by a bounded Brent search on its neighbours."""
    i = int(np.argmax(values))
    if values[i] <= 0:
        return float(grid[i]), 0.0
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    if hi <= lo:
        return float(grid[i]), float(values[i])
    res = minimize_scalar(lambda t: -f(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-15 * max(1.0, hi)})
    if -res.fun >= values[i]:
        return float(res.x), float(-res.fun)
    return float(grid[i]), float(values[i])


def default_write_window(params: SystemParams) -> float:
    heat = params.Gamma * params.n_th
    t = 10.0 / heat if heat > 0 else 2.0 / params.Gamma
    return min(t, 2.0 / params.Gamma)


def write_peak(params: SystemParams, t_max: float | None = None, n: int = 400,
               method: str = "analytic"):
    """``(t_peak, E_N_peak)`` of the write-phase entanglement.

    ``method="analytic"`` uses the closed-form covariance, ``"lyapunov"`` the
    numerical integrator on the same grid (refinement always uses the closed
    form, which the integrator reproduces to its tolerance).
    """
    from .analytic import covariance_entangle
    from .gaussian import BlockDecomposition

    t_max = default_write_window(params) if t_max is None else t_max
    grid = np.linspace(0.0, t_max, n + 1)

    def raw(t):
        lam = lambda_minus(BlockDecomposition.from_matrix(covariance_entangle(params, t)))
        return -math.log(2 * lam) if lam > 0 else math.inf

    if method == "analytic":
        vals = np.array([raw(t) for t in grid])
    elif method == "lyapunov":
        Vs = lyapunov_propagate(stokes_drift_diffusion(params), initial_state(params),
                                (0.0, t_max), grid, rate=params.Gamma)
        vals = np.array([-math.log(2 * lambda_minus(extract_pair(V, 0, 1))) for V in Vs])
    else:
        raise ValueError(f"unknown method {method!r}")
    t, v = _refine_peak(raw, grid, vals)
    return t, max(v, 0.0)


def readout_peak(params: SystemParams, timeline: ProtocolTimeline, n: int = 400):
    """``(time since readout start, peak Ẽ_N)`` using the closed-form readout solution."""
    from .analytic import readout_correlations, readout_covariance_since_start

    corr = readout_correlations(params, timeline.tau1, timeline.tau_d)
    grid = np.linspace(0.0, timeline.tau2, n + 1)

    def raw(s):
        lam = lambda_minus(readout_covariance_since_start(params, corr, s))
        return -math.log(2 * lam) if lam > 0 else math.inf

    vals = np.array([raw(s) for s in grid])
    t, v = _refine_peak(raw, grid, vals)
    return t, max(v, 0.0)


# --- Monte-Carlo oracle -------------------------------------------------------------

def _psd_sqrt(M) -> np.ndarray:
    """``L`` with ``L L^T = M`` for symmetric positive semidefinite ``M``."""
    w, U = np.linalg.eigh(0.5 * (M + M.T))
    return U * np.sqrt(np.clip(w, 0.0, None))


def default_mc_step(params: SystemParams, refine: int = 10) -> float:
    """Euler-Maruyama step ``min(1e-3/Γ, 1e-2/g, 1e-2/g̃) / refine``."""
    cands = [1e-3 / params.Gamma]
    cands += [1e-2 / x for x in (params.g, params.g_tilde) if x > 0]
    return min(cands) / refine


def euler_maruyama_step(dd: DriftDiffusion, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(F, L)`` with ``x <- F x + L ξ`` one Euler-Maruyama step."""
    n = dd.A.shape[0]
    return np.eye(n) + h * dd.A, _psd_sqrt(dd.D * h)


def _mc_block(dd, V0, t, h, count, seed, block):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))
    n = V0.shape[0]
    steps = max(1, int(math.ceil(t / h - 1e-9)))
    h = t / steps
    F, L = euler_maruyama_step(dd, h)
    x = rng.standard_normal((count, n)) @ _psd_sqrt(V0).T
    FT, LT = F.T, L.T
    for _ in range(steps):
        x = x @ FT + rng.standard_normal((count, n)) @ LT
    prods = x[:, :, None] * x[:, None, :]
    return prods.sum(axis=0), (prods**2).sum(axis=0)


def mc_oracle(dd: DriftDiffusion, V0, t: float, n_traj: int, seed: int, *,
              h: float | None = None, workers: int = 1):
    """Monte-Carlo estimate of ``V(t)`` and per-element standard errors.

    Trajectories run in fixed blocks of ``MC_BLOCK``; block ``k`` draws from the
    Philox substream ``(seed, k)``, so the result does not depend on
    ``workers``.  The mean is zero throughout, so ``<x x^T>`` is estimated
    directly.
    """
    if n_traj < 100:
        raise ValueError("n_traj must be at least 100")
    V0 = np.asarray(V0, dtype=float)
    if h is None:
        h = 1e-3 / _rate_scale(dd)
    if t == 0:
        h = 1.0
    sizes = [MC_BLOCK] * (n_traj // MC_BLOCK)
    if n_traj % MC_BLOCK:
        sizes.append(n_traj % MC_BLOCK)
    jobs = [(dd, V0, t, h, c, seed, k) for k, c in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda a: _mc_block(*a), jobs))
    else:
        parts = [_mc_block(*a) for a in jobs]
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    mean = s1 / n_traj
    var = (s2 / n_traj - mean**2) * n_traj / (n_traj - 1)
    se = np.sqrt(np.clip(var, 0.0, None) / n_traj)
    return 0.5 * (mean + mean.T), se
