"""Physical constants and unit conversions.

Everything inside the package is SI (J, m, s, K). Configuration files quote
energies in eV and lengths in nm; the helpers below convert at that boundary.
The module-level names are read from the frozen ``CONSTANTS`` record.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import constants as const

from .errors import DomainError


class PhysicalConstants(BaseModel):
    """Constants shared by every module; immutable."""

    model_config = ConfigDict(frozen=True)

    hbar: float = Field(default=const.hbar, description="Reduced Planck constant, J s")
    c: float = Field(default=const.c, description="Speed of light, m/s")
    k_B: float = Field(default=const.k, description="Boltzmann constant, J/K")
    # fixed, independent of the CODATA release shipped with scipy
    alpha: float = Field(default=7.2973525693e-3, description="Fine-structure constant")
    v_F_default: float = Field(default=const.c / 300.0, description="Fermi velocity, m/s")


CONSTANTS = PhysicalConstants()

HBAR: float = CONSTANTS.hbar
C: float = CONSTANTS.c
K_B: float = CONSTANTS.k_B
ALPHA: float = CONSTANTS.alpha
V_F_DEFAULT: float = CONSTANTS.v_F_default
EV: float = const.e
NM: float = 1e-9
UM: float = 1e-6


def ev_to_joule(value_ev: float) -> float:
    return value_ev * EV


def joule_to_ev(value_j: float) -> float:
    return value_j / EV


def effective_temperatures(a: float, v_F: float = V_F_DEFAULT) -> tuple[float, float]:
    """Characteristic temperatures of a gap of width ``a``.

    Returns ``(T_eff, T_eff_graphene)`` defined by ``k_B T_eff = hbar c / (2a)``
    and ``k_B T_eff_graphene = hbar v_F / (2a)``. The second is lower by
    ``c / v_F`` and is what makes thermal effects large for graphene.
    """
    if a <= 0:
        raise DomainError(f"separation must be positive, got {a}")
    return HBAR * C / (2 * a * K_B), HBAR * v_F / (2 * a * K_B)


def normalization_B(a: float | np.ndarray, T: float) -> float | np.ndarray:
    """Pressure scale ``k_B T / (8 pi a^3)`` used to normalise ``|P|``."""
    return K_B * T / (8 * np.pi * np.asarray(a, dtype=float) ** 3)
