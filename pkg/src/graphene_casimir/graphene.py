"""Polarization tensor of a gapped, doped graphene sheet at imaginary frequencies.

All tensor values are returned divided by hbar: ``pi00_over_hbar`` in 1/m and
``pi_over_hbar`` in 1/m^3. Inputs ``xi`` (rad/s) and ``k_perp`` (1/m) may be
arrays; they are broadcast against each other and every result has the
broadcast shape.

The thermal part of ``Pi`` is evaluated as ``xi^2 [...]`` folded into the
bracket, i.e. ``c^2 q~^2 [gamma^2 - Re(((gamma + i u)^2 + (1 - gamma^2) D^2) / S)]``
with ``S`` the principal square root of
``1 - u^2 + 2 i gamma u + D^2 - gamma^2 D^2``. The folded bracket stays finite
at ``gamma = 0``. With ``w = gamma + i u`` and ``rho^2 = 1 - gamma^2`` one has
``S^2 - w^2 = rho^2 (1 + D^2)``, so both brackets are evaluated as ``rho^2``
times a bounded factor and stay accurate as ``gamma -> 1``.
"""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import expit
from typing_extensions import Self

from .constants import ALPHA, EV, HBAR, K_B, V_F_DEFAULT, C
from .errors import DomainError
from .matsubara import matsubara_frequency
from .quadrature import integrate

logger = logging.getLogger(__name__)

StaticLimit = Literal["richardson", "nearest", "direct"]
GapRegime = Literal["gap_dominated", "doping_dominated"]

# e-foldings of the Fermi factor kept in the head of the u-integral
FERMI_WINDOW = 40.0
# xi -> 0+ sampling points, in units of the first Matsubara frequency
STATIC_SAMPLES = (1e-3, 1e-4)
# first u-panel width relative to the branch-point scale, and its floor relative to the piece
GRADING_FRACTION = 0.1
GRADING_FLOOR = 1e-6
# psi switches to its 1/x series above this argument
PSI_SERIES_FROM = 10.0
_PSI_TERMS = np.arange(10)
_PSI_COEFFICIENTS = (
    (-1.0) ** _PSI_TERMS * 4 * (_PSI_TERMS + 1) / ((2 * _PSI_TERMS + 1) * (2 * _PSI_TERMS + 3))
)

_BLOCK = 1024
_MAX_PANELS = 4096


class GrapheneSheet(BaseModel):
    """Parameters of one graphene layer."""

    model_config = ConfigDict(frozen=True)

    delta: float = Field(default=0.0, ge=0, description="Energy gap, eV")
    mu: float = Field(default=0.0, ge=0, description="Chemical potential, eV")
    v_F: float = Field(default=V_F_DEFAULT, gt=0, description="Fermi velocity, m/s")

    @model_validator(mode="after")
    def fermi_velocity_below_c(self) -> Self:
        if self.v_F >= C:
            raise ValueError("Fermi velocity must be below the speed of light")
        return self

    @property
    def delta_joule(self) -> float:
        return self.delta * EV

    @property
    def mu_joule(self) -> float:
        return self.mu * EV

    @property
    def is_pristine(self) -> bool:
        return self.delta == 0 and self.mu == 0


def gap_regime(sheet: GrapheneSheet) -> GapRegime:
    """``gap_dominated`` when ``delta >= 2 mu`` (T = 0 tensor independent of mu)."""
    return "gap_dominated" if sheet.delta >= 2 * sheet.mu else "doping_dominated"


@dataclass(frozen=True)
class KinematicAux:
    """Dimensionless variables of one ``(xi, k_perp)`` point.

    ``rho = v_F k_perp / (c q~)`` complements ``gamma`` with ``gamma^2 + rho^2 = 1``.
    """

    q_tilde: np.ndarray
    D: np.ndarray
    gamma: np.ndarray
    B: np.ndarray
    rho: np.ndarray


@dataclass(frozen=True)
class PolarizationParts:
    pi00_zero_T: np.ndarray
    pi_zero_T: np.ndarray
    pi00_thermal: np.ndarray
    pi_thermal: np.ndarray


@dataclass(frozen=True)
class PolarizationValues:
    """``Pi_00 / hbar`` and ``Pi / hbar`` with an optional zero-T/thermal split.

    ``static_spread`` holds, where ``xi = 0``, the spread of the ``xi -> 0+``
    extrapolation of the thermal ``Pi``.
    """

    pi00_over_hbar: np.ndarray
    pi_over_hbar: np.ndarray
    parts: PolarizationParts | None = None
    static_spread: np.ndarray | None = None

    @classmethod
    def combine(
        cls, zero: "PolarizationValues", thermal: "PolarizationValues"
    ) -> "PolarizationValues":
        parts = PolarizationParts(
            pi00_zero_T=zero.pi00_over_hbar,
            pi_zero_T=zero.pi_over_hbar,
            pi00_thermal=thermal.pi00_over_hbar,
            pi_thermal=thermal.pi_over_hbar,
        )
        return cls(
            pi00_over_hbar=parts.pi00_zero_T + parts.pi00_thermal,
            pi_over_hbar=parts.pi_zero_T + parts.pi_thermal,
            parts=parts,
            static_spread=thermal.static_spread,
        )


def psi(x: float | np.ndarray) -> float | np.ndarray:
    """``2 [x + (1 - x^2) arctan(1/x)]`` with the limit ``pi`` at ``x = 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("psi is defined for x >= 0")
    far = x > PSI_SERIES_FROM
    with np.errstate(divide="ignore"):
        y = np.where(far, 1.0 / x, 0.0)
    series = 2.0 * y * np.polyval(_PSI_COEFFICIENTS[::-1], y * y)
    near = np.where(far, 0.0, x)
    value = np.where(far, series, 2.0 * (near + (1.0 - near * near) * np.arctan2(1.0, near)))
    return float(value) if value.ndim == 0 else value


def _broadcast(
    xi: float | np.ndarray, k_perp: float | np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    xi_arr, k_arr = np.broadcast_arrays(
        np.asarray(xi, dtype=float), np.asarray(k_perp, dtype=float)
    )
    if np.any(xi_arr < 0):
        raise DomainError("imaginary frequency must be non-negative")
    if np.any(k_arr <= 0):
        if np.any((k_arr == 0) & (xi_arr == 0)):
            raise DomainError("q_tilde vanishes at k_perp = 0, xi = 0")
        raise DomainError("polarization tensor needs k_perp > 0")
    return xi_arr, k_arr


def kinematics(
    sheet: GrapheneSheet,
    xi: float | np.ndarray,
    k_perp: float | np.ndarray,
    T: float = 0.0,
) -> KinematicAux:
    xi, k_perp = _broadcast(xi, k_perp)
    ratio = sheet.v_F / C
    q_tilde = np.sqrt(ratio * ratio * k_perp * k_perp + (xi / C) ** 2)
    with np.errstate(divide="ignore"):
        B = HBAR * C * q_tilde / (2 * K_B * T) if T > 0 else np.full_like(q_tilde, np.inf)
    return KinematicAux(
        q_tilde=q_tilde,
        D=sheet.delta_joule / (HBAR * C * q_tilde),
        gamma=xi / (C * q_tilde),
        B=B,
        rho=ratio * k_perp / q_tilde,
    )


def polarization_zero_T(
    sheet: GrapheneSheet, xi: float | np.ndarray, k_perp: float | np.ndarray
) -> PolarizationValues:
    """Zero-temperature, undoped tensor evaluated at frequency ``xi``."""
    xi, k_perp = _broadcast(xi, k_perp)
    aux = kinematics(sheet, xi, k_perp)
    factor = ALPHA * k_perp * k_perp * psi(aux.D)
    return PolarizationValues(
        pi00_over_hbar=factor / aux.q_tilde, pi_over_hbar=factor * aux.q_tilde
    )


def _pieces(
    breaks: np.ndarray, u_s: np.ndarray, D: np.ndarray
) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Map consecutive breakpoints onto ``u = u_s -/+ s^2`` intervals in ``s``."""
    # u_s - u, with u_s - D = 1 / (u_s + D) exact for large D
    gap = np.where(breaks == D[:, None], (1.0 / (u_s + D))[:, None], u_s[:, None] - breaks)
    pieces = []
    for j in range(breaks.shape[1] - 1):
        lo, hi = gap[:, j], gap[:, j + 1]
        below = breaks[:, j + 1] <= u_s
        s_lo = np.where(below, np.sqrt(np.maximum(hi, 0.0)), np.sqrt(np.maximum(-lo, 0.0)))
        s_hi = np.where(below, np.sqrt(np.maximum(lo, 0.0)), np.sqrt(np.maximum(-hi, 0.0)))
        sign = np.where(below, -1.0, 1.0)
        pieces.append((sign, s_lo, s_hi))
    return pieces


def _u_integrals(
    aux: KinematicAux,
    mu_over_kT: float,
    u_fermi: np.ndarray,
    *,
    step: bool,
    atol00: np.ndarray,
    atol_pi: np.ndarray,
    rtol: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Both u-integrals of the thermal tensor for flattened kinematic points.

    With ``step`` the Fermi factors are replaced by their T -> 0 limit, a unit
    weight on ``[D, u_fermi]``.

    Each piece is integrated in ``t`` with ``s = h (exp(t) - 1)``, which grades
    the panels geometrically toward the branch point. ``h`` is the width in
    ``s`` over which the radicand leaves its value at the branch point.
    """
    D, gamma, B, rho = aux.D, aux.gamma, aux.B, aux.rho
    n = D.size
    u_s = np.hypot(1.0, D)
    if step:
        upper = np.maximum(u_fermi, D)
        breaks = np.stack([D, upper, np.clip(u_s, D, upper)], axis=1)
    else:
        window = FERMI_WINDOW / B
        upper = np.maximum(D, u_fermi) + window
        candidates = [u_s, u_fermi - window, u_fermi, u_fermi + window]
        breaks = np.stack([D, upper] + [np.clip(c, D, upper) for c in candidates], axis=1)
    breaks = np.sort(breaks, axis=1)
    pieces = _pieces(breaks, u_s, D)

    sign = np.concatenate([p[0] for p in pieces])
    s_lo = np.concatenate([p[1] for p in pieces])
    s_hi = np.concatenate([p[2] for p in pieces])
    owner = np.tile(np.arange(n), len(pieces))

    g_d2 = (gamma * D) ** 2
    at_branch = np.abs(2j * gamma * u_s - g_d2)
    grading = np.maximum(
        GRADING_FRACTION * np.sqrt(at_branch / (2.0 * u_s))[owner], GRADING_FLOOR * s_hi
    )
    grading = np.maximum(grading, np.finfo(float).tiny)
    t_lo = np.log1p(s_lo / grading)
    t_hi = np.log1p(s_hi / grading)

    def bracket(t: np.ndarray, index: np.ndarray, which: str) -> np.ndarray:
        j = owner[index]
        h = grading[index][:, None]
        sig = sign[index][:, None]
        us = u_s[j][:, None]
        g = gamma[j][:, None]
        s = h * np.expm1(t)
        s2 = s * s
        u = us + sig * s2
        # 1 - u^2 + D^2 - gamma^2 D^2 + 2 i gamma u, with 1 + D^2 - u^2 taken from s
        radicand = -sig * s2 * (2.0 * us + sig * s2) - g_d2[j][:, None] + 2j * g * u
        # S^2 - w^2 = rho^2 u_s^2 with w = gamma + i u; both brackets carry rho^2
        w = g + 1j * u
        us2 = us * us
        p2 = rho[j][:, None] ** 2
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            root = np.sqrt(radicand)
            inverse = 1.0 / root
            across = 1.0 / (root + w)
            if which == "pi00":
                value = p2 * (1.0 / (1.0 + g) + ((w * us2 * across - 1.0) * inverse).real)
            else:
                value = p2 * (-g / (1.0 + g) - us2 * across.real + inverse.real)
            if step:
                weight = 1.0
            else:
                bu = B[j][:, None] * u
                weight = expit(mu_over_kT - bu) + expit(-mu_over_kT - bu)
            # s = 0 sits on the branch point u = u_s
            return np.where(s > 0, weight * value * 2.0 * s * (s + h), 0.0)

    results = {}
    for which, atol in (("pi00", atol00), ("pi", atol_pi)):
        atol_all = np.tile(atol, len(pieces))
        total = np.zeros(s_lo.size)
        for start in range(0, s_lo.size, _BLOCK):
            block = np.arange(start, min(start + _BLOCK, s_lo.size))

            def integrand(t: np.ndarray, index: np.ndarray, block=block, which=which):
                return bracket(t, block[index], which)

            total[block] = integrate(
                integrand,
                t_lo[block],
                t_hi[block],
                rtol=rtol,
                atol=atol_all[block],
                max_panels=_MAX_PANELS,
            ).value
        results[which] = total.reshape(len(pieces), n).sum(axis=0)
    return results["pi00"], results["pi"]


def _thermal_parts(
    sheet: GrapheneSheet,
    xi: np.ndarray,
    k_perp: np.ndarray,
    T: float,
    *,
    step: bool,
    rtol: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Thermal ``Pi_00 / hbar`` and ``Pi / hbar`` on flattened inputs."""
    aux = kinematics(sheet, xi, k_perp, T)
    zero = polarization_zero_T(sheet, xi, k_perp)
    u_fermi = 2 * sheet.mu_joule / (HBAR * C * aux.q_tilde)
    pref00 = 4 * ALPHA * C * C * aux.q_tilde / sheet.v_F**2
    pref_pi = 4 * ALPHA * C * C * aux.q_tilde**3 / sheet.v_F**2
    mu_over_kT = sheet.mu_joule / (K_B * T) if T > 0 else np.inf
    i00, ipi = _u_integrals(
        aux,
        mu_over_kT,
        u_fermi,
        step=step,
        atol00=rtol * zero.pi00_over_hbar / pref00,
        atol_pi=rtol * zero.pi_over_hbar / pref_pi,
        rtol=rtol,
    )
    return pref00 * i00, -pref_pi * ipi


def polarization_thermal(
    sheet: GrapheneSheet,
    xi: float | np.ndarray,
    k_perp: float | np.ndarray,
    T: float,
    *,
    rtol: float = 1e-9,
    static_limit: StaticLimit = "richardson",
) -> PolarizationValues:
    """Explicitly temperature-dependent part of the tensor.

    At ``xi = 0`` the ``Pi`` component is, by default, the limit ``xi -> 0+``
    obtained by Richardson extrapolation from ``xi = 1e-3 xi_1`` and
    ``1e-4 xi_1``; the extrapolation spread is reported in ``static_spread``.
    ``static_limit="direct"`` evaluates the folded bracket at ``gamma = 0``
    instead, ``"nearest"`` uses the ``1e-4 xi_1`` sample as is.
    """
    if T <= 0:
        raise DomainError(f"thermal tensor needs T > 0, got {T} K")
    xi, k_perp = _broadcast(xi, k_perp)
    shape = xi.shape
    xi_flat, k_flat = xi.ravel(), k_perp.ravel()
    pi00, pi = _thermal_parts(sheet, xi_flat, k_flat, T, step=False, rtol=rtol)

    spread = None
    static = xi_flat == 0
    if static.any() and static_limit != "direct":
        xi_1 = matsubara_frequency(1, T)
        k_static = k_flat[static]
        samples = [
            _thermal_parts(
                sheet, np.full(k_static.shape, eps * xi_1), k_static, T, step=False, rtol=rtol
            )[1]
            for eps in STATIC_SAMPLES
        ]
        far, near = samples
        ratio = STATIC_SAMPLES[0] / STATIC_SAMPLES[1]
        limit = (ratio * near - far) / (ratio - 1.0) if static_limit == "richardson" else near
        pi = pi.copy()
        pi[static] = limit
        spread = np.zeros_like(pi)
        spread[static] = np.abs(limit - near) if static_limit == "richardson" else np.abs(near - far)
        spread = spread.reshape(shape)

    return PolarizationValues(
        pi00_over_hbar=pi00.reshape(shape),
        pi_over_hbar=pi.reshape(shape),
        static_spread=spread,
    )


def polarization_full(
    sheet: GrapheneSheet,
    xi: float | np.ndarray,
    k_perp: float | np.ndarray,
    T: float,
    *,
    rtol: float = 1e-9,
    static_limit: StaticLimit = "richardson",
) -> PolarizationValues:
    zero = polarization_zero_T(sheet, xi, k_perp)
    thermal = polarization_thermal(
        sheet, xi, k_perp, T, rtol=rtol, static_limit=static_limit
    )
    return PolarizationValues.combine(zero, thermal)


def polarization_T0_limit(
    sheet: GrapheneSheet,
    xi: float | np.ndarray,
    k_perp: float | np.ndarray,
    *,
    rtol: float = 1e-9,
) -> PolarizationValues:
    """Tensor at ``T = 0`` including the doping contribution when ``delta < 2 mu``."""
    zero = polarization_zero_T(sheet, xi, k_perp)
    if gap_regime(sheet) == "gap_dominated":
        thermal = PolarizationValues(
            pi00_over_hbar=np.zeros_like(zero.pi00_over_hbar),
            pi_over_hbar=np.zeros_like(zero.pi_over_hbar),
        )
        return PolarizationValues.combine(zero, thermal)
    xi_arr, k_arr = _broadcast(xi, k_perp)
    pi00, pi = _thermal_parts(sheet, xi_arr.ravel(), k_arr.ravel(), 0.0, step=True, rtol=rtol)
    thermal = PolarizationValues(
        pi00_over_hbar=pi00.reshape(xi_arr.shape), pi_over_hbar=pi.reshape(xi_arr.shape)
    )
    return PolarizationValues.combine(zero, thermal)


def polarization_at(
    sheet: GrapheneSheet,
    xi: float | np.ndarray,
    k_perp: float | np.ndarray,
    T: float,
    *,
    tensor: Literal["full", "zero_T"] = "full",
    rtol: float = 1e-9,
    static_limit: StaticLimit = "richardson",
) -> PolarizationValues:
    """Tensor used in reflection coefficients: full at ``T > 0``, its limit at ``T = 0``.

    ``tensor="zero_T"`` keeps only the zero-temperature term, which carries the
    temperature implicitly through ``xi`` alone.
    """
    if tensor == "zero_T":
        return polarization_zero_T(sheet, xi, k_perp)
    if T == 0:
        return polarization_T0_limit(sheet, xi, k_perp, rtol=rtol)
    return polarization_full(sheet, xi, k_perp, T, rtol=rtol, static_limit=static_limit)


def nonlocal_permittivities(
    sheet: GrapheneSheet,
    xi: float | np.ndarray,
    k_perp: float | np.ndarray,
    T: float,
    *,
    rtol: float = 1e-9,
) -> tuple[np.ndarray, np.ndarray]:
    """Transverse and longitudinal permittivities ``(eps_Tr, eps_L)``."""
    xi, k_perp = _broadcast(xi, k_perp)
    if np.any(xi == 0):
        raise DomainError("transverse permittivity is undefined at xi = 0")
    values = polarization_at(sheet, xi, k_perp, T, rtol=rtol)
    eps_l = 1.0 + values.pi00_over_hbar / (2 * k_perp)
    eps_tr = 1.0 + C * C * values.pi_over_hbar / (2 * k_perp * xi * xi)
    return eps_tr, eps_l
