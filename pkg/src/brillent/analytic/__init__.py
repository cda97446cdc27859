"""Closed-form solutions and printed approximants."""

from .coefficients import (READOUT, WRITE, DegenerateRoots, ModeCoefficients,
                           correlations, expint, mode_coefficients)
from .readout import (ReadoutCorrelations, analytic_readout_covariance,
                      lambda_tilde_minus_cubic, lambda_tilde_minus_poly, nas_exact,
                      nas_transferred, readout_correlations, readout_covariance_since_start,
                      readout_moments, readout_rate_squared)
from .write import (HeatingDominates, covariance_elements_strongcoupling,
                    covariance_entangle, covariance_from_moments, en_max,
                    lambda_minus_cubic, lambda_minus_from_elements, lambda_minus_rational,
                    lambda_minus_room, lambda_minus_strongcoupling, write_moments)

__all__ = [name for name in dir() if not name.startswith("_")]
