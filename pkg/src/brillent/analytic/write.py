"""Photon-phonon covariance during the write pulse and its approximations."""

from __future__ import annotations

import math

import numpy as np

from ..model import SystemParams
from .coefficients import WRITE, correlations, mode_coefficients


class HeatingDominates(ValueError):
    """``2 (g / Γ n_th)^2 >= 1``: the peak-entanglement estimate is undefined."""


def write_moments(params: SystemParams, t: float, n0: float | None = None):
    """Return ``(<a^dag a>, <b^dag b>, <a b>)`` after a write pulse of length ``t``.

    The initial state is vacuum for the Stokes mode and a thermal state with
    ``n0`` phonons (default: the bath occupancy).
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    n_th = params.n_th
    n0 = n_th if n0 is None else n0
    coeffs = mode_coefficients(params, WRITE)
    M0 = np.diag([1.0, n0]).astype(complex)
    Q = np.diag([params.gamma, params.Gamma * n_th]).astype(complex)
    M = correlations(coeffs, M0, Q, t)
    # occupancies are clipped at zero to remove round-off from G(0) != I
    return max(M[0, 0].real - 1.0, 0.0), max(M[1, 1].real, 0.0), complex(M[0, 1])


def covariance_from_moments(n_a: float, n_b: float, ab: complex) -> np.ndarray:
    """Covariance of a phase-insensitive pair with ``<a b^dag> = <a a> = 0``."""
    v11, v33 = n_a + 0.5, n_b + 0.5
    v13, v14 = ab.real, ab.imag
    return np.array([
        [v11, 0.0, v13, v14],
        [0.0, v11, v14, -v13],
        [v13, v14, v33, 0.0],
        [v14, -v13, 0.0, v33],
    ])


def covariance_entangle(params: SystemParams, t: float, n0: float | None = None) -> np.ndarray:
    """Exact 4x4 covariance of ``(a, b)`` at time ``t`` into the write pulse."""
    return covariance_from_moments(*write_moments(params, t, n0))


def lambda_minus_cubic(g: float, Gamma: float, n_th: float, t):
    """Short-time estimate ``(1 - 2 g²t² + (2/3) g² Γ n_th t³)/2``."""
    t = np.asarray(t, dtype=float)
    return 0.5 * (1 - 2 * g**2 * t**2 + (2 / 3) * g**2 * Gamma * n_th * t**3)


def en_max(g: float, Gamma: float, n_th: float) -> float:
    """``-ln[1 - 2 (g/A_heat)^2]`` with heating rate ``A_heat = Γ n_th``."""
    if g == 0:
        return 0.0
    heat = Gamma * n_th
    if heat <= 0:
        raise HeatingDominates("no thermal heating: estimate diverges")
    x = 2 * (g / heat) ** 2
    if x >= 1:
        raise HeatingDominates(f"2 (g/Γn_th)^2 = {x:.3f} >= 1")
    return -math.log1p(-x)


def lambda_minus_rational(g: float, Gamma: float, n_th: float, t):
    """Phase-matched rational approximant ``X / (2 Y)`` (degree 11 over 8 in t)."""
    if g <= 0:
        raise ValueError("g must be positive")
    t = np.asarray(t, dtype=float)
    G, h = Gamma, Gamma * n_th
    X = (1
         + G * (h - g) / (2 * g) * t
         + (g**2 - G**2 * n_th) * t**2
         + g * (2 * g + 3 * G) / 3 * h * t**3
         + g**2 * (g**2 - 4 * G**2 * n_th) / 3 * t**4
         + 4 * g**4 * (6 * g + 5 * G) / (15 * (2 * g - G)) * h * t**5
         + 2 * g**4 * (g**2 - 24 * G**2 * n_th) / 45 * t**6
         + g**6 / 3 * h * t**7
         + g**8 / 315 * t**8
         + 4 * g**8 / 45 * h * t**9
         + g**10 / 50 * h * t**11)
    gt2 = (g * t) ** 2
    Y = (1 + 3 * g * (2 * g + G) / 2 * t**2
         + (2 * g + G) * g**3 * t**4 * (4 / 3 + 11 / 15 * gt2 + gt2**2 / 5 + gt2**3 / 26))
    return 0.5 * X / Y


def strongcoupling_rates(params: SystemParams):
    """``(Δ, A, α1, α4)`` of the strong-coupling element expansion."""
    gam, Gam, g = params.gamma, params.Gamma, params.g
    dsum = params.delta_a + params.delta_b
    disc = g**2 + (Gam - gam) ** 2 / 16 - dsum**2 / 4
    big_a = math.sqrt(disc**2 + (Gam - gam) ** 2 * dsum**2 / 16)
    root = 2 * math.sqrt((big_a + disc) / 2)
    return disc, big_a, -(gam + Gam) / 2 - root, -(gam + Gam) / 2 + root


def covariance_elements_strongcoupling(params: SystemParams, t: float):
    """Approximate ``(V11, V14, V33)`` for ``g >> Γ >> γ`` and small detunings."""
    gam, G, g, n = params.gamma, params.Gamma, params.g, params.n_th
    D, _, a1, a4 = strongcoupling_rates(params)
    sD = math.sqrt(D)
    c = G - gam
    q = ((g - c / 4) ** 2 + (c / 4) ** 2) / g**2

    e11 = g**2 * (1 + n) / (4 * D) * (1 + c / (2 * g) - (2 * G + G * c / g) / (4 * sD + (gam + G)))
    e12 = g**2 / (8 * D) * (1 + q * (1 + 2 * n) + 2 * q / (4 * sD - (gam + G)) * G * (1 + 2 * n))
    e13 = -(G + c * n) / (2 * D * (gam + G)) * g**2
    e14 = (1 + 2 * n) * G * g**2 * (16 * D + (G + gam) * (G - 3 * gam)) / (32 * D**2 * (G + gam))

    e21 = g / (8 * D) * (c * n / 2 + 2 * sD * (n + 1)
                         - G * (1 + 2 * n) / 2 * (4 * sD + c) / (4 * sD + (G + gam)))
    e22 = -g / (8 * D) * (-c * n / 2 + 2 * sD * (n + 1)
                          + G * (1 + 2 * n) / 2 * (4 * sD - c) / (4 * sD - (G + gam)))
    e23 = g / (8 * D) * (-c * n + (G**2 - gam**2) * G * (1 + 2 * n) / (G + gam) ** 2)
    e24 = gam * G * g * (1 + 2 * n) / (4 * D * (G + gam))

    e31 = g**2 / (8 * D) * (2 * (n + 1) - c / (2 * g) - 2 * (gam + G * (2 * n + 1)) / (4 * sD + (G + gam)))
    e32 = g**2 / (8 * D) * (2 * (n + 1) + c / (2 * g) + 2 * (gam + G * (2 * n + 1)) / (4 * sD + (G + gam)))
    e33 = g**2 * c * (1 + n) / (2 * D * (G + gam))
    e34 = -g**2 * (G * (2 * n + 1) - gam) * (16 * D + (G + gam) ** 2) / (32 * D**2 * (G + gam))

    x1, x4, xm = math.exp(a1 * t), math.exp(a4 * t), math.exp(-(gam + G) * t / 2)
    v33 = e11 * x1 + e12 * x4 + e13 * xm + e14
    v14 = e21 * x1 + e22 * x4 + e23 * xm + e24
    v11 = e31 * x1 + e32 * x4 + e33 * xm + e34
    return v11, v14, v33


def lambda_minus_from_elements(v11: float, v14: float, v33: float) -> float:
    """``|V14² V33 - V11 V33²| / (V33² + V14²)``."""
    return abs(v14**2 * v33 - v11 * v33**2) / (v33**2 + v14**2)


def lambda_minus_strongcoupling(params: SystemParams, t: float) -> float:
    return lambda_minus_from_elements(*covariance_elements_strongcoupling(params, t))


def lambda_minus_room(params: SystemParams, t):
    """Short-time room-temperature approximant with optical loss kept."""
    g, G, gam, n = params.g, params.Gamma, params.gamma, params.n_th
    t = np.asarray(t, dtype=float)
    # the printed g^2 (3Γ² + 16g²) / (24 g²) is taken with g² cancelled
    num = (1 + (g**2 - (G**2 - gam**2) / 4) * t**2
           + (3 * G**2 + 16 * g**2) / 24 * (G * n) * t**3)
    return 0.5 * np.abs(num / (1 + 3 * g**2 * t**2))
