import math

import numpy as np
import pytest
from scipy.linalg import expm

from brillent.gaussian import direct_sum, symplectic_form, symplectic_spectrum, partial_transpose

GAMMA = 2 * math.pi * 2e6


def random_symplectic(rng, n_modes, scale=0.6):
    H = rng.normal(size=(2 * n_modes, 2 * n_modes)) * scale
    H = 0.5 * (H + H.T)
    return expm(symplectic_form(n_modes) @ H)


def random_state(rng, n_modes=2, scale=0.6, max_n=5.0):
    S = random_symplectic(rng, n_modes, scale)
    nu = 0.5 + rng.uniform(0, max_n, size=n_modes)
    return S @ np.diag(np.repeat(nu, 2)) @ S.T


def brute_lambda_minus(V4):
    return float(symplectic_spectrum(partial_transpose(V4, 1)).min())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
