"""Closed-form normal-mode coefficients of the two linear Langevin systems.

Write phase, on the vector ``c = (a, b^dag)``::

    a(t)     = (mu2 e^{w+ t} - mu3 e^{w- t}) a(0) + mu1 (-e^{w+ t} + e^{w- t}) b^dag(0)
    b^dag(t) = mu1 (e^{w+ t} - e^{w- t}) a(0) + (-mu3 e^{w+ t} + mu2 e^{w- t}) b^dag(0)

Readout phase, on ``d = (ã, b)``::

    ã(t) = (mu2 e^{w+ t} - mu3 e^{w- t}) ã(0) + mu1 (e^{w+ t} - e^{w- t}) b(0)
    b(t) = mu1 (e^{w+ t} - e^{w- t}) ã(0) + (-mu3 e^{w+ t} + mu2 e^{w- t}) b(0)

so in both cases the propagator is ``G(t) = K+ e^{w+ t} + K- e^{w- t}``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..model import SystemParams

WRITE = "write"
READOUT = "readout"

#: couplings below this fraction of the root modulus are treated as zero
#: (mu1 ~ g/|root| would only contribute at order 1e-40 and 1/g may overflow)
NEGLIGIBLE_COUPLING = 1e-20


class DegenerateRoots(ArithmeticError):
    """The two normal-mode rates coincide and the mu coefficients blow up."""


@dataclass(frozen=True)
class ModeCoefficients:
    omega_plus: complex
    omega_minus: complex
    tau_plus: complex
    tau_minus: complex
    mu1: complex
    mu2: complex
    mu3: complex
    variant: str

    @property
    def rates(self) -> tuple[complex, complex]:
        return self.omega_plus, self.omega_minus

    def kernels(self) -> tuple[np.ndarray, np.ndarray]:
        """Matrices ``(K+, K-)`` with ``G(t) = K+ e^{w+ t} + K- e^{w- t}``."""
        m1, m2, m3 = self.mu1, self.mu2, self.mu3
        if self.variant == WRITE:
            kp = np.array([[m2, -m1], [m1, -m3]], dtype=complex)
            km = np.array([[-m3, m1], [-m1, m2]], dtype=complex)
        else:
            kp = np.array([[m2, m1], [m1, -m3]], dtype=complex)
            km = np.array([[-m3, -m1], [-m1, m2]], dtype=complex)
        return kp, km

    def propagator(self, t: float) -> np.ndarray:
        kp, km = self.kernels()
        return kp * cmath.exp(self.omega_plus * t) + km * cmath.exp(self.omega_minus * t)

    def alphas(self) -> tuple[complex, complex, complex, complex]:
        wp, wm = self.omega_plus, self.omega_minus
        return (wp + wp.conjugate(), wp + wm.conjugate(),
                wm + wp.conjugate(), wm + wm.conjugate())


def _uncoupled(wp, wm, m11, variant) -> ModeCoefficients:
    # coupling -> 0: the first mode follows whichever rate equals its own
    inf = complex(math.inf, 0.0)
    if abs(wp - m11) <= abs(wm - m11):
        mu2, mu3 = 1.0 + 0j, 0j
    else:
        mu2, mu3 = 0j, -1.0 + 0j
    return ModeCoefficients(wp, wm, inf, inf, 0j, mu2, mu3, variant)


def mode_coefficients(params: SystemParams, variant: str = WRITE) -> ModeCoefficients:
    """Normal-mode rates ``w±``, ``tau±`` and ``mu1..mu3`` for one phase.

    Square roots use the principal branch and ``w+`` always takes the minus
    sign in front of the root, whichever root decays faster.  At zero (or
    negligible) coupling ``tau±`` are infinite and ``mu1 = 0``, ``(mu2, mu3)``
    take their limits so that the modes decouple.
    """
    gam, Gam = params.gamma, params.Gamma
    if variant == WRITE:
        g = params.g
        da, db = params.delta_a, params.delta_b
        s = cmath.sqrt(16 * g * g + ((Gam - gam) - 2j * (da + db)) ** 2)
        base = -(gam + Gam) / 4 - 1j * (da - db) / 2
        wp, wm = base - s / 4, base + s / 4
        if g <= NEGLIGIBLE_COUPLING * abs(s):
            return _uncoupled(wp, wm, -gam / 2 - 1j * da, variant)
        shift = -(2 * (da + db) + 1j * (Gam - gam)) / (4 * g)
        tp, tm = shift + 1j * s / (4 * g), shift - 1j * s / (4 * g)
    elif variant == READOUT:
        g = params.g_tilde
        dat, db = params.delta_antistokes, params.delta_b
        s = cmath.sqrt(16 * g * g - ((Gam - gam) - 2j * (dat - db)) ** 2)
        base = -(gam + Gam) / 4 - 1j * (db + dat) / 2
        wp, wm = base - 1j * s / 4, base + 1j * s / 4
        if g <= NEGLIGIBLE_COUPLING * abs(s):
            return _uncoupled(wp, wm, -gam / 2 - 1j * dat, variant)
        shift = (2 * (dat - db) + 1j * (Gam - gam)) / (4 * g)
        tp, tm = shift + s / (4 * g), shift - s / (4 * g)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    diff = tp - tm
    if abs(diff) < 1e-14:
        raise DegenerateRoots(f"tau+ - tau- = {diff!r}: coincident normal modes")
    return ModeCoefficients(wp, wm, tp, tm, 1 / diff, tp / diff, tm / diff, variant)


def expint(alpha: complex, t: float) -> complex:
    """``(e^{alpha t} - 1)/alpha`` without cancellation for small ``|alpha| t``."""
    if alpha == 0:
        return complex(t)
    z = alpha * t
    if abs(z) < 1e-8:
        return t * (1 + z / 2 + z * z / 6)
    x, y = z.real, z.imag
    # exp(x+iy) - 1 = (expm1(x) cos y - 2 sin^2(y/2)) + i exp(x) sin y
    re = math.expm1(x) * math.cos(y) - 2 * math.sin(y / 2) ** 2
    im = math.exp(x) * math.sin(y)
    return complex(re, im) / alpha


def correlations(coeffs: ModeCoefficients, M0: np.ndarray, Q: np.ndarray, t: float) -> np.ndarray:
    """Second moments ``<v v^dag>`` at time ``t`` for ``v = G v(0) + noise``.

    ``M0`` is ``<v(0) v(0)^dag>`` and ``Q`` the white-noise intensity matrix
    ``<ξ ξ^dag>`` already multiplied by the damping rates.
    """
    kp, km = coeffs.kernels()
    G = coeffs.propagator(t)
    out = G @ M0 @ G.conj().T
    ks = ((kp, coeffs.omega_plus), (km, coeffs.omega_minus))
    for ka, wa in ks:
        for kb, wb in ks:
            out = out + ka @ Q @ kb.conj().T * expint(wa + wb.conjugate(), t)
    return 0.5 * (out + out.conj().T)
