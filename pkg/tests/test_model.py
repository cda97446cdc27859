import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from brillent.analytic import READOUT, WRITE, mode_coefficients
from brillent.gaussian import direct_sum, thermal, vacuum
from brillent.model import (C_LIGHT, SystemParams, antistokes_drift_diffusion,
                            delay_drift_diffusion, detunings, stokes_drift_diffusion,
                            thermal_occupancy)
from brillent.propagator import lyapunov_propagate
from conftest import GAMMA


def to_quadratures(alphas):
    """Complex amplitudes -> (x1, p1, x2, p2, ...) with x = √2 Re α, p = √2 Im α."""
    out = []
    for a in alphas:
        out += [math.sqrt(2) * a.real, math.sqrt(2) * a.imag]
    return np.array(out)


def test_thermal_occupancy_values():
    assert thermal_occupancy(1e10, 0.0) == 0.0
    # reference Bose function evaluated independently with the exact SI constants
    ref = lambda T: 1 / (math.exp(1.054571817e-34 * 2 * math.pi * 7.7e9 / (1.380649e-23 * T)) - 1)  # noqa
    assert thermal_occupancy(2 * math.pi * 7.7e9, 30) == pytest.approx(ref(30), rel=1e-14)
    assert thermal_occupancy(2 * math.pi * 7.7e9, 30) == pytest.approx(80.7, abs=0.05)
    assert thermal_occupancy(2 * math.pi * 7.7e9, 300) == pytest.approx(811, abs=0.5)
    with pytest.raises(ValueError):
        thermal_occupancy(1e10, -1)


def test_system_params_validation():
    with pytest.raises(ValueError):
        SystemParams(gamma=-1, Gamma=1, Omega_ac=1e10, g=0)
    with pytest.raises(ValueError):
        SystemParams(gamma=1, Gamma=0, Omega_ac=1e10, g=0, T_m=30)
    p = SystemParams(gamma=1, Gamma=0, Omega_ac=1e10, g=0, T_m=0)
    assert p.n_th == 0


def test_detunings():
    p = SystemParams.operating_point()
    assert detunings(p.with_(k=0)) == (0.0, 0.0)
    da, db = detunings(p)
    assert da == pytest.approx(0.2 * GAMMA, rel=1e-14)
    assert p.k == pytest.approx(0.2 * GAMMA / (C_LIGHT / 2.4), rel=1e-14)
    assert p.k == pytest.approx(2.01e-2, rel=1e-2)
    assert da / db == pytest.approx(p.v_opt / p.v_ac, rel=1e-14)
    q = p.with_(v_ac=p.v_opt)
    assert detunings(q)[0] == detunings(q)[1]


def test_uncoupled_drift_is_pure_damping():
    p = SystemParams.operating_point(g_over_Gamma=0, delta_a_over_Gamma=0)
    dd = stokes_drift_diffusion(p)
    assert np.array_equal(dd.A, np.diag([-p.gamma / 2] * 2 + [-p.Gamma / 2] * 2))
    assert np.allclose(dd.D, np.diag([p.gamma / 2] * 2 + [p.Gamma * (2 * p.n_th + 1) / 2] * 2))
    V = direct_sum(vacuum(1), thermal(p.n_th))
    assert np.abs(dd.rhs(V)).max() < 1e-12 * p.Gamma * p.n_th


def test_antistokes_uncoupled_block_diagonal():
    p = SystemParams.operating_point(g_over_Gamma=0, g_tilde_over_Gamma=0)
    A = antistokes_drift_diffusion(p, 3).A
    for i in range(3):
        for j in range(3):
            if i != j:
                assert not A[2 * i:2 * i + 2, 2 * j:2 * j + 2].any()
    with pytest.raises(ValueError):
        antistokes_drift_diffusion(p, 4)


def _first_moment_write(p, alpha0, beta0, t):
    """Closed-form amplitudes for da/dt = -(γ/2+iΔa)a - i g b*, db/dt = ... - i g a*."""
    c = mode_coefficients(p, WRITE)
    G = c.propagator(t)
    a, bc = G @ np.array([alpha0, np.conj(beta0)])
    return a, np.conj(bc)


def _first_moment_readout(p, at0, b0, t):
    c = mode_coefficients(p, READOUT)
    at, b = c.propagator(t) @ np.array([at0, b0])
    return at, b


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 40), st.floats(0.01, 2.0), st.floats(-1, 1), st.floats(0, 5))
def test_write_first_moments_match_operator_solution(g, gamma, da, t):
    p = SystemParams(gamma=gamma * GAMMA, Gamma=GAMMA, Omega_ac=1e10, g=g * GAMMA,
                     k=da * GAMMA / (C_LIGHT / 2.4))
    a0, b0 = 0.3 - 0.7j, 1.1 + 0.2j
    T = t / GAMMA
    phi = expm(stokes_drift_diffusion(p).A * T) @ to_quadratures([a0, b0])
    a, b = _first_moment_write(p, a0, b0, T)
    ref = to_quadratures([a, b])
    assert np.allclose(phi, ref, rtol=1e-9, atol=1e-9 * np.abs(ref).max())


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 40), st.floats(0.01, 2.0), st.floats(-1, 1), st.floats(0, 5))
def test_readout_first_moments_match_operator_solution(g, gamma, da, t):
    p = SystemParams(gamma=gamma * GAMMA, Gamma=GAMMA, Omega_ac=1e10, g=0,
                     g_tilde=g * GAMMA, k=da * GAMMA / (C_LIGHT / 2.4))
    b0, at0 = 0.3 - 0.7j, 1.1 + 0.2j
    T = t / GAMMA
    phi = expm(antistokes_drift_diffusion(p, 2).A * T) @ to_quadratures([b0, at0])
    at, b = _first_moment_readout(p, at0, b0, T)
    ref = to_quadratures([b, at])
    assert np.allclose(phi, ref, rtol=1e-9, atol=1e-9 * np.abs(ref).max())


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 50), st.floats(0, 50), st.floats(0, 0.5), st.floats(0, 1), st.sampled_from([0, 30, 300]))
def test_diffusion_is_psd(g, gt, gam, da, T):
    p = SystemParams.operating_point(g_over_Gamma=g, g_tilde_over_Gamma=gt, gamma=gam * GAMMA,
                           delta_a_over_Gamma=da, T_m=T)
    for dd in (stokes_drift_diffusion(p), delay_drift_diffusion(p),
               antistokes_drift_diffusion(p, 2), antistokes_drift_diffusion(p, 3)):
        assert np.array_equal(dd.D, dd.D.T)
        assert np.linalg.eigvalsh(dd.D).min() >= -1e-12
        assert np.all(np.isfinite(dd.A))


def test_uncoupled_thermal_state_is_stationary():
    p = SystemParams.operating_point(g_over_Gamma=0, g_tilde_over_Gamma=0)
    V0 = direct_sum(vacuum(1), thermal(p.n_th), vacuum(1))
    ts = np.linspace(0, 10 / GAMMA, 11)
    for V in lyapunov_propagate(antistokes_drift_diffusion(p, 3), V0, (0, ts[-1]), ts):
        assert np.allclose(V, V0, rtol=1e-10, atol=0)


def test_lossless_beam_splitter_swaps_and_conserves():
    p = SystemParams(gamma=0, Gamma=0, Omega_ac=1e10, g=0, g_tilde=5e7, T_m=0)
    V0 = direct_sum(thermal(7.0), vacuum(1))  # (b, ã)
    period = math.pi / p.g_tilde
    ts = np.linspace(0, period, 41)
    Vs = lyapunov_propagate(antistokes_drift_diffusion(p, 2), V0, (0, period), ts)
    n = lambda V, i: (V[2 * i, 2 * i] + V[2 * i + 1, 2 * i + 1] - 1) / 2  # noqa: E731
    for V in Vs:
        assert n(V, 0) + n(V, 1) == pytest.approx(7.0, rel=1e-9)
    assert n(Vs[20], 1) == pytest.approx(7.0, rel=1e-9)  # full swap at half period
    assert n(Vs[-1], 0) == pytest.approx(7.0, rel=1e-9)
