"""Gaussian-state simulation of pulsed photon-phonon entanglement in Brillouin waveguides."""

from .gaussian import (BlockDecomposition, DiscriminantNegative, extract_pair,
                       lambda_minus, log_negativity, symplectic_spectrum)
from .model import ProtocolTimeline, SystemParams, thermal_occupancy

__version__ = "0.1.0"
