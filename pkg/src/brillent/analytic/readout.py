"""Anti-Stokes readout: swap occupancy, correlations at readout start, Stokes/anti-Stokes covariance.

Times named ``s`` are measured from the start of the readout pulse
(``tau1 + tau_d``); functions taking a ``timeline`` accept absolute time.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..gaussian import BlockDecomposition
from ..model import ProtocolTimeline, SystemParams
from .coefficients import READOUT, correlations, mode_coefficients
from .write import covariance_from_moments, write_moments


@dataclass(frozen=True)
class ReadoutCorrelations:
    """Stokes/phonon moments at the start of the readout pulse.

    ``C_ns = Im(<ab> + <ba>)``.  ``ab`` keeps the full complex ``<ab>``
    when it is known; otherwise it is taken as purely imaginary.
    """

    n_s: float
    n_b: float
    C_ns: float
    ab: complex | None = None

    @property
    def ab_value(self) -> complex:
        return self.ab if self.ab is not None else 0.5j * self.C_ns

    @property
    def readout_possible(self) -> bool:
        return self.C_ns**2 > 4 * self.n_b * self.n_s


def nas_transferred(g_tilde: float, gamma: float, Gamma: float, n_b: float, t):
    """Strong-coupling swap occupancy ``½ e^{-(γ+Γ)t/2} (1 - cos 2g̃t) n_b``."""
    t = np.asarray(t, dtype=float)
    return 0.5 * np.exp(-(gamma + Gamma) * t / 2) * (1 - np.cos(2 * g_tilde * t)) * n_b


def readout_correlations(params: SystemParams, tau1: float, tau_d: float) -> ReadoutCorrelations:
    """Moments after a write pulse ``tau1`` and a free-decay delay ``tau_d``."""
    if tau1 < 0 or tau_d < 0:
        raise ValueError("tau1 and tau_d must be non-negative")
    n_a, n_b1, ab = write_moments(params, tau1)
    gt, G = params.fiber_loss, params.Gamma
    n_s = n_a * math.exp(-gt * tau_d)
    n_b = n_b1 * math.exp(-G * tau_d) - params.n_th * math.expm1(-G * tau_d)
    ab = ab * cmath.exp(-(gt / 2 + 1j * params.delta_a) * tau_d) \
        * cmath.exp(-(G / 2 + 1j * params.delta_b) * tau_d)
    return ReadoutCorrelations(n_s, n_b, 2 * ab.imag, ab)


def readout_moments(params: SystemParams, corr: ReadoutCorrelations, s: float):
    """``(<a^dag a>, <ã^dag ã>, <b^dag b>, <a ã>)`` a time ``s`` into the readout."""
    if s < 0:
        raise ValueError("s must be non-negative")
    coeffs = mode_coefficients(params, READOUT)
    M0 = np.diag([1.0, corr.n_b + 1.0]).astype(complex)
    Q = np.diag([params.gamma, params.Gamma * (params.n_th + 1)]).astype(complex)
    M = correlations(coeffs, M0, Q, s)
    fiber = cmath.exp(-(params.fiber_loss / 2 + 1j * params.delta_a) * s)
    n_a = corr.n_s * math.exp(-params.fiber_loss * s)
    a_at = fiber * coeffs.propagator(s)[0, 1] * corr.ab_value
    return n_a, max(M[0, 0].real - 1.0, 0.0), max(M[1, 1].real - 1.0, 0.0), a_at


def readout_covariance_since_start(params: SystemParams, corr: ReadoutCorrelations,
                                   s: float) -> BlockDecomposition:
    n_a, n_at, _, a_at = readout_moments(params, corr, s)
    return BlockDecomposition.from_matrix(covariance_from_moments(n_a, n_at, a_at))


def analytic_readout_covariance(params: SystemParams, corr: ReadoutCorrelations,
                                timeline: ProtocolTimeline, t: float) -> BlockDecomposition:
    """Covariance of (Stokes, anti-Stokes) at absolute time ``t >= tau1 + tau_d``."""
    s = t - timeline.readout_start
    if s < -1e-15 * max(1.0, abs(t)):
        raise ValueError("t precedes the start of the readout pulse")
    return readout_covariance_since_start(params, corr, max(s, 0.0))


def nas_exact(params: SystemParams, corr: ReadoutCorrelations, s: float) -> float:
    """Anti-Stokes occupancy from the full closed-form solution."""
    return readout_moments(params, corr, s)[1]


def readout_rate_squared(g_tilde: float, corr: ReadoutCorrelations) -> float:
    """``η² = g̃² (C_ns² - 4 n_b n_s) / (1 + 2 n_s)``."""
    return g_tilde**2 * (corr.C_ns**2 - 4 * corr.n_b * corr.n_s) / (1 + 2 * corr.n_s)


def lambda_tilde_minus_cubic(g_tilde: float, Gamma: float, n_th: float,
                             corr: ReadoutCorrelations, t):
    """``½[1 - η² t² + (2/3) g̃² Γ n_th t³]`` with ``t`` from readout start."""
    t = np.asarray(t, dtype=float)
    eta2 = readout_rate_squared(g_tilde, corr)
    return 0.5 * (1 - eta2 * t**2 + (2 / 3) * g_tilde**2 * Gamma * n_th * t**3)


def _poly_coefficients(gt: float, G: float, nth: float, corr: ReadoutCorrelations):
    ns, nb, C2 = corr.n_s, corr.n_b, corr.C_ns**2
    p = 3 + 8 * ns + 4 * ns**2
    q = 1 + 2 * ns
    num = [
        (1 + 3 * ns + 2 * ns**2) / 4,
        -G / 16 * p,
        gt**2 * (nb * p - (1 + ns) * C2) / 4,
        G * gt**2 * ((3 + 2 * ns) * (2 + 4 * ns + 3 * C2) + 4 * nth * p
                     - 6 * nb * (5 + 12 * ns + 4 * ns**2)) / 48,
        gt**4 * (6 * nb**2 * q - nb * p + (1 + ns - 3 * nb) * C2) / 12,
        -G * gt**4 * q * (3 + 2 * ns + 5 * nb * (12 * nb - 2 * ns - 9)
                          + nth * (6 - 40 * nb + 4 * ns)) / 120
        - G * gt**4 * (5 + 4 * nth - 12 * nb + 2 * ns) / 48 * C2,
        gt**6 * (nb * p - 30 * nb**2 * q - (1 + ns - 15 * nb) * C2) / 90,
        G * gt**6 * q * (3 + 420 * nb**2 + 2 * ns - 7 * nb * (21 + 2 * ns)
                         + 2 * nth * (3 - 112 * nb + 2 * ns)) / 1260
        + G * gt**6 * (11 + 16 * nth - 60 * nb + 2 * ns) / 360 * C2,
        gt**8 * (126 * nb**2 * q - nb * p + (1 + ns - 63 * nb) * C2) / 120,
        -G * gt**8 * q * (3 + 2 * ns + 3 * nb * (756 * nb - 6 * ns - 179)
                          + 2 * nth * (3 - 492 * nb + 2 * ns)) / 22680
        - G * gt**8 * (91 + 164 * nth - 756 * nb + 6 * ns) / 15120 * C2,
        gt**10 * (nb * p - 510 * nb**2 * q - (1 + ns - 256 * nb) * C2) / 28350,
        G * gt**10 * (nb * q * (-3 + 4 * nth + 1020 * nb - 2 * ns)
                      + (1 - nth - 510 * nb + ns) * C2) / 56700,
        gt**12 * nb * q * (2 * nth + 1023 * nb) / 467775
        - gt**12 * (nth + 1023 * nb) * C2 / 935550,
    ]
    r = 3 + 2 * ns
    den = [
        (1 + 3 * ns + 2 * ns**2) / 2,
        -G * r / 8,
        gt**2 * (2 * nb * r + C2) / 4,
        G * gt**2 * (6 + 4 * ns + 4 * nth * r - 6 * nb * (5 + 2 * ns) - 3 * C2) / 24,
        gt**4 * (12 * nb**2 - 2 * nb * r - C2) / 12,
        G * gt**4 * (-3 - 2 * ns - 5 * nb * (12 * nb - 9 - 2 * ns)
                     + nth * (-6 + 40 * nb - 4 * ns)) / 60,
        gt**6 * (-60 * nb**2 + 2 * nb * r + C2) / 90,
        G * gt**6 * (6 + 4 * ns + 14 * nb * (60 * nb - 21 - 2 * ns)
                     + 4 * nth * (3 - 112 * nb + 2 * ns) - 7 * C2) / 1260,
        gt**8 * (252 * nb**2 - 2 * nb * r - C2) / 1260,
        G * gt**8 * (-6 - 4 * ns - 6 * nb * (756 * nb - 6 * ns - 179)
                     + 4 * nth * (-3 + 492 * nb - 2 * ns) + 9 * C2) / 22680,
        gt**10 * (2 * nb * r - 1020 * nb**2 + C2) / 28350,
        -G * gt**10 * (2 * nb * (3 - 4 * nth + 2 * ns) - 2040 * nb**2 + C2) / 56700,
        gt**12 * nb * (2 * nth + 1023 * nb) / 233888,
        -G * gt**12 * nb * (2 * nth + 1023 * nb) / 233888,
        -gt**14 * nb**2 / 2598,
    ]
    return np.array(num), np.array(den)


def lambda_tilde_minus_poly(g_tilde: float, Gamma: float, n_th: float,
                            corr: ReadoutCorrelations, t):
    """Rational approximant, degree 12 over degree 14 in time since readout start."""
    num, den = _poly_coefficients(g_tilde, Gamma, n_th, corr)
    t = np.asarray(t, dtype=float)
    # np.polyval wants highest degree first
    return np.abs(np.polyval(num[::-1], t) / np.polyval(den[::-1], t))
