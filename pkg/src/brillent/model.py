"""Physical parameters and quadrature-space drift/diffusion for each protocol phase.

Sign conventions
----------------
With ``a = (x + i p)/sqrt(2)`` the Langevin terms map to quadratures as

* detuning ``-i Δ a``        ->  ``dx/dt = +Δ p``,  ``dp/dt = -Δ x``
* squeezing ``-i g b^dag``   ->  ``dx_a/dt = -g p_b``, ``dp_a/dt = -g x_b``
  (and symmetrically for ``b`` driven by ``a^dag``)
* beam splitter ``-i g b``   ->  ``dx_a/dt = +g p_b``, ``dp_a/dt = -g x_b``
  (and symmetrically for ``b`` driven by ``a``)

A damping rate ``κ`` with bath occupancy ``n`` contributes ``-κ/2`` on the
diagonal of the drift and ``κ(2n+1)/2`` to both quadrature diffusions.  The
optical baths are at zero temperature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K
C_LIGHT = 3.0e8  # m / s, value used for v_opt = c / n_opt


def thermal_occupancy(omega_ac: float, T_m: float) -> float:
    """Bose occupancy ``1/(exp(ħΩ/k_B T) - 1)``; exactly 0 at ``T = 0``."""
    if omega_ac <= 0:
        raise ValueError("omega_ac must be positive")
    if T_m < 0:
        raise ValueError("temperature must be non-negative")
    if T_m == 0:
        return 0.0
    x = HBAR * omega_ac / (K_B * T_m)
    if x > 700:
        return 0.0
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class SystemParams:
    """All rates in rad/s, velocities in m/s, temperature in K, k in 1/m.

    ``delta_at`` overrides the anti-Stokes detuning; by default it equals
    the Stokes detuning ``k v_opt``.  ``gamma_tilde`` defaults to ``gamma``.
    """

    gamma: float
    Gamma: float
    Omega_ac: float
    g: float
    g_tilde: float = 0.0
    gamma_tilde: float | None = None
    v_opt: float = C_LIGHT / 2.4
    v_ac: float = 6000.0
    T_m: float = 30.0
    k: float = 0.0
    delta_at: float | None = None
    n_th: float = field(init=False)

    def __post_init__(self):
        for name in ("gamma", "Gamma", "Omega_ac", "v_opt", "v_ac", "T_m"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.gamma_tilde is not None and self.gamma_tilde < 0:
            raise ValueError("gamma_tilde must be non-negative")
        n = thermal_occupancy(self.Omega_ac, self.T_m) if self.Omega_ac > 0 else 0.0
        object.__setattr__(self, "n_th", n)
        if n > 0 and self.Gamma <= 0:
            raise ValueError("Gamma must be positive when thermal noise is active")

    @property
    def fiber_loss(self) -> float:
        return self.gamma if self.gamma_tilde is None else self.gamma_tilde

    @property
    def delta_a(self) -> float:
        return self.k * self.v_opt

    @property
    def delta_b(self) -> float:
        return self.k * self.v_ac

    @property
    def delta_antistokes(self) -> float:
        return self.delta_a if self.delta_at is None else self.delta_at

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    @classmethod
    def operating_point(cls, g_over_Gamma=30.0, g_tilde_over_Gamma=0.0, T_m=30.0,
              delta_a_over_Gamma=0.2, **kw) -> "SystemParams":
        """Operating point of the pulsed write/readout scheme at 30 K."""
        Gamma = 2 * math.pi * 2e6
        v_opt = kw.pop("v_opt", C_LIGHT / 2.4)
        return cls(gamma=kw.pop("gamma", 2 * math.pi * 0.1e6), Gamma=Gamma,
                   Omega_ac=kw.pop("Omega_ac", 2 * math.pi * 7.7e9),
                   g=g_over_Gamma * Gamma, g_tilde=g_tilde_over_Gamma * Gamma,
                   v_opt=v_opt, T_m=T_m,
                   k=delta_a_over_Gamma * Gamma / v_opt, **kw)


def detunings(params: SystemParams) -> tuple[float, float]:
    """Wavenumber-induced shifts ``(k v_opt, k v_ac)``."""
    return params.delta_a, params.delta_b


@dataclass(frozen=True)
class DriftDiffusion:
    """Linear moment equation ``dV/dt = A V + V A^T + D``."""

    A: np.ndarray
    D: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.A.shape[0] // 2

    def rhs(self, V):
        return self.A @ V + V @ self.A.T + self.D

    def scaled(self, rate: float) -> "DriftDiffusion":
        return DriftDiffusion(self.A / rate, self.D / rate)


def _local(kappa: float, delta: float) -> np.ndarray:
    return np.array([[-kappa / 2, delta], [-delta, -kappa / 2]])


def _noise(kappa: float, n: float = 0.0) -> np.ndarray:
    return kappa * (2 * n + 1) / 2 * np.eye(2)


def _squeeze(A, i, j, g):
    # -i g b^dag in da/dt and -i g a^dag in db/dt
    xi, pi, xj, pj = 2 * i, 2 * i + 1, 2 * j, 2 * j + 1
    A[xi, pj] += -g
    A[pi, xj] += -g
    A[xj, pi] += -g
    A[pj, xi] += -g


def _beam_splitter(A, i, j, g):
    # -i g b in da/dt and -i g a in db/dt
    xi, pi, xj, pj = 2 * i, 2 * i + 1, 2 * j, 2 * j + 1
    A[xi, pj] += g
    A[pi, xj] += -g
    A[xj, pi] += g
    A[pj, xi] += -g


def stokes_drift_diffusion(params: SystemParams) -> DriftDiffusion:
    """Write phase: modes ``(a, b)`` under two-mode squeezing."""
    A = np.zeros((4, 4))
    A[:2, :2] = _local(params.gamma, params.delta_a)
    A[2:, 2:] = _local(params.Gamma, params.delta_b)
    _squeeze(A, 0, 1, params.g)
    D = np.zeros((4, 4))
    D[:2, :2] = _noise(params.gamma)
    D[2:, 2:] = _noise(params.Gamma, params.n_th)
    return DriftDiffusion(A, D)


def delay_drift_diffusion(params: SystemParams) -> DriftDiffusion:
    """Delay phase: Stokes light decays in fiber, phonons relax to the bath."""
    A = np.zeros((4, 4))
    A[:2, :2] = _local(params.fiber_loss, params.delta_a)
    A[2:, 2:] = _local(params.Gamma, params.delta_b)
    D = np.zeros((4, 4))
    D[:2, :2] = _noise(params.fiber_loss)
    D[2:, 2:] = _noise(params.Gamma, params.n_th)
    return DriftDiffusion(A, D)


def antistokes_drift_diffusion(params: SystemParams, n_modes: int = 3) -> DriftDiffusion:
    """Readout phase: beam splitter between phonon ``b`` and anti-Stokes ``ã``.

    ``n_modes=2`` orders the modes ``(b, ã)``; ``n_modes=3`` orders them
    ``(a, b, ã)`` with the delayed Stokes mode ``a`` decaying at the fiber
    loss rate and otherwise uncoupled.
    """
    if n_modes not in (2, 3):
        raise ValueError("n_modes must be 2 or 3")
    off = n_modes - 2
    N = 2 * n_modes
    A = np.zeros((N, N))
    D = np.zeros((N, N))
    ib, ia = off, off + 1
    A[2 * ib:2 * ib + 2, 2 * ib:2 * ib + 2] = _local(params.Gamma, params.delta_b)
    D[2 * ib:2 * ib + 2, 2 * ib:2 * ib + 2] = _noise(params.Gamma, params.n_th)
    A[2 * ia:2 * ia + 2, 2 * ia:2 * ia + 2] = _local(params.gamma, params.delta_antistokes)
    D[2 * ia:2 * ia + 2, 2 * ia:2 * ia + 2] = _noise(params.gamma)
    _beam_splitter(A, ib, ia, params.g_tilde)
    if n_modes == 3:
        A[:2, :2] = _local(params.fiber_loss, params.delta_a)
        D[:2, :2] = _noise(params.fiber_loss)
    return DriftDiffusion(A, D)


@dataclass(frozen=True)
class ProtocolTimeline:
    """Write pulse ``tau1``, delay ``tau_d`` and readout pulse ``tau2`` (seconds)."""

    tau1: float
    tau_d: float
    tau2: float

    def __post_init__(self):
        if min(self.tau1, self.tau_d, self.tau2) < 0:
            raise ValueError("protocol durations must be non-negative")

    @property
    def readout_start(self) -> float:
        return self.tau1 + self.tau_d

    @property
    def end(self) -> float:
        return self.tau1 + self.tau_d + self.tau2
