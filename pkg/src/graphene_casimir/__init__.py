"""Thermal Casimir interaction of real graphene from the exact polarization tensor."""

from .errors import CasimirError
from .lifshitz import CavityConfig, entropy, free_energy, pressure, pressure_T0, thermal_correction

__version__ = "0.1.0"

__all__ = [
    "CasimirError",
    "CavityConfig",
    "entropy",
    "free_energy",
    "pressure",
    "pressure_T0",
    "thermal_correction",
]
