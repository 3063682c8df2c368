"""Lifshitz free energy, pressure, entropy and thermal corrections.

The wave-vector integral at Matsubara frequency ``xi`` is done in the
dimensionless variable ``y = 2 a q`` running from ``zeta = 2 a xi / c`` to
``zeta + 80``, with ``y = zeta + s^2`` so that ``dy = 2 s ds`` and the
integrand is smooth at the lower end. In these variables

    P = -(k_B T / pi) / (8 a^3) sum' int y^2 sum_lambda x / (1 - x) dy
    F =  (k_B T / 2 pi) / (4 a^2) sum' int y sum_lambda ln(1 - x) dy

with ``x = r1 r2 exp(-y)``. At ``T = 0`` the sum is replaced by
``hbar c / (4 pi a) int dzeta``.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat
from typing_extensions import Self

from .constants import HBAR, K_B, C, normalization_B
from .errors import DomainError, NumericalError, UndefinedRatioError
from .matsubara import MatsubaraSum, matsubara_sum
from .quadrature import QuadratureResult, integrate
from .reflection import (
    PlanarStructure,
    ReflectionPair,
    TensorChoice,
    is_transparent,
    reflection_pair,
)

logger = logging.getLogger(__name__)

Quantity = Literal["pressure", "free_energy"]

DEFAULT_TOLERANCE = 1e-6
Y_SPAN = 80.0
# xi integral at T = 0: one linear panel, then log-spaced panels in zeta
ZETA_MIN = 2e-6
ZETA_MAX = 100.0
ZETA_LOG_PANELS = 8


class CavityConfig(BaseModel):
    """Two planar structures a distance ``a`` (m) apart at temperature ``T`` (K)."""

    model_config = ConfigDict(frozen=True)

    side_1: PlanarStructure
    side_2: PlanarStructure
    a: PositiveFloat
    T: float = Field(ge=0)

    def at(self, *, a: float | None = None, T: float | None = None) -> Self:
        update: dict[str, float] = {}
        if a is not None:
            if a <= 0:
                raise DomainError(f"separation must be positive, got {a} m")
            update["a"] = a
        if T is not None:
            if T < 0:
                raise DomainError(f"temperature must be non-negative, got {T} K")
            update["T"] = T
        return self.model_copy(update=update)

    def swapped(self) -> Self:
        return self.model_copy(update={"side_1": self.side_2, "side_2": self.side_1})


@dataclass(frozen=True)
class PressureResult:
    """Pressure in Pa (negative means attraction) with bookkeeping.

    ``l_terms_used`` is the number of Matsubara terms, or the number of
    quadrature panels of the frequency integral on the ``T = 0`` path.
    ``terms`` holds the weighted per-``l`` contributions in Pa.
    """

    value: float
    truncation_error: float
    l_terms_used: int
    normalized: float
    free_energy: float | None = None
    terms: np.ndarray | None = None
    zero_frequency_te: float = 0.0
    zero_frequency_te_spread: float = 0.0


@dataclass(frozen=True)
class EntropyResult:
    """Entropy in J/(m^2 K) with the Richardson discretization estimate."""

    value: float
    error_estimate: float
    steps: tuple[float, ...]


def _kernel(quantity: Quantity, rr: np.ndarray, y: np.ndarray) -> np.ndarray:
    x = rr * np.exp(-y)
    if quantity == "pressure":
        return y * y * x / (1.0 - x)
    return y * np.log1p(-x)


def _has_extrapolated_te(config: CavityConfig, tensor: TensorChoice) -> bool:
    return tensor == "full" and any(
        side.sheet is not None for side in (config.side_1, config.side_2)
    )


def zeta_integrals(
    config: CavityConfig,
    T: float,
    xi: np.ndarray,
    quantity: Quantity,
    *,
    polarizations: tuple[str, ...] = ("tm", "te"),
    tensor: TensorChoice = "full",
    tolerance: float = DEFAULT_TOLERANCE,
    te_shift: bool = False,
) -> np.ndarray:
    """Dimensionless wave-vector integrals, one per frequency in ``xi``.

    ``te_shift`` moves every graphene TE coefficient by its ``xi -> 0+``
    extrapolation spread.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if is_transparent(config.side_1) or is_transparent(config.side_2):
        logger.debug("a vacuum side reflects nothing; wave-vector integrals vanish")
        return np.zeros(xi.shape)
    a = config.a
    zeta = 2 * a * xi / C
    tensor_rtol = tolerance / 10

    def side(structure: PlanarStructure, xi_rows: np.ndarray, k: np.ndarray) -> ReflectionPair:
        return reflection_pair(structure, xi_rows, k, T, tensor=tensor, rtol=tensor_rtol)

    def te(pair: ReflectionPair) -> np.ndarray:
        if te_shift and pair.r_te_spread is not None:
            return pair.r_te - pair.r_te_spread
        return pair.r_te

    def integrand(s: np.ndarray, index: np.ndarray) -> np.ndarray:
        z = zeta[index][:, None]
        y = z + s * s
        k = s * np.sqrt(2 * z + s * s) / (2 * a)
        xi_rows = np.broadcast_to(xi[index][:, None], s.shape)
        p1 = side(config.side_1, xi_rows, k)
        p2 = side(config.side_2, xi_rows, k)
        total = np.zeros_like(s)
        if "tm" in polarizations:
            total += _kernel(quantity, p1.r_tm * p2.r_tm, y)
        if "te" in polarizations:
            total += _kernel(quantity, te(p1) * te(p2), y)
        return 2.0 * s * total

    upper = np.full(xi.shape, np.sqrt(Y_SPAN))
    return integrate(integrand, 0.0, upper, rtol=tolerance).value


@dataclass(frozen=True)
class _StaticTerm:
    total: float
    te: float
    te_spread: float


def _static_term(
    config: CavityConfig, quantity: Quantity, tensor: TensorChoice, tolerance: float
) -> _StaticTerm:
    """The ``l = 0`` integral split by polarization (unweighted)."""
    def single(polarization: str, te_shift: bool = False) -> float:
        value = zeta_integrals(
            config,
            config.T,
            np.zeros(1),
            quantity,
            polarizations=(polarization,),
            tensor=tensor,
            tolerance=tolerance,
            te_shift=te_shift,
        )
        return float(value[0])

    tm, te = single("tm"), single("te")
    spread = abs(single("te", te_shift=True) - te) if _has_extrapolated_te(config, tensor) else 0.0
    logger.debug(f"l = 0 term: TM {tm:.6e}, TE {te:.6e} +- {spread:.1e}")
    return _StaticTerm(total=tm + te, te=te, te_spread=spread)


def _lifshitz_sum(
    config: CavityConfig, quantity: Quantity, tensor: TensorChoice, tolerance: float
) -> tuple[MatsubaraSum, _StaticTerm]:
    if config.T <= 0:
        raise DomainError("the Matsubara sum needs T > 0; use the T = 0 path")
    static = _static_term(config, quantity, tensor, tolerance)

    def term(xi: np.ndarray) -> np.ndarray:
        values = np.empty(xi.size)
        zero = xi == 0
        values[zero] = static.total
        if not zero.all():
            values[~zero] = zeta_integrals(
                config, config.T, xi[~zero], quantity, tensor=tensor, tolerance=tolerance
            )
        return values

    return matsubara_sum(term, config.T, tolerance), static


def _pressure_scale(config: CavityConfig) -> float:
    return -K_B * config.T / (np.pi * 8 * config.a**3)


def _free_energy_scale(config: CavityConfig) -> float:
    return K_B * config.T / (2 * np.pi * 4 * config.a**2)


def free_energy(
    config: CavityConfig,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
    tensor: TensorChoice = "full",
) -> float:
    """Free energy per unit area, J/m^2."""
    total, _ = _lifshitz_sum(config, "free_energy", tensor, tolerance)
    return _free_energy_scale(config) * total.value


def pressure(
    config: CavityConfig,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
    tensor: TensorChoice = "full",
    with_free_energy: bool = False,
) -> PressureResult:
    total, static = _lifshitz_sum(config, "pressure", tensor, tolerance)
    scale = _pressure_scale(config)
    value = scale * total.value
    logger.info(
        f"P(a = {config.a * 1e9:.1f} nm, T = {config.T} K) = {value:.6e} Pa "
        f"from {total.l_terms_used} terms"
    )
    return PressureResult(
        value=value,
        truncation_error=total.truncation_error,
        l_terms_used=total.l_terms_used,
        normalized=abs(value) / float(normalization_B(config.a, config.T)),
        free_energy=(
            free_energy(config, tolerance=tolerance, tensor=tensor) if with_free_energy else None
        ),
        terms=scale * total.terms,
        zero_frequency_te=0.5 * scale * static.te,
        zero_frequency_te_spread=abs(0.5 * scale * static.te_spread),
    )


def pressure_implicit_only(
    config: CavityConfig, *, tolerance: float = DEFAULT_TOLERANCE
) -> PressureResult:
    """Pressure with the graphene tensor reduced to its zero-temperature term."""
    return pressure(config, tolerance=tolerance, tensor="zero_T")


def _t0_integral(config: CavityConfig, quantity: Quantity, tolerance: float) -> QuadratureResult:
    edges = np.geomspace(ZETA_MIN, ZETA_MAX, ZETA_LOG_PANELS + 1)
    lower = np.concatenate([[0.0], np.log(edges[:-1])])
    upper = np.concatenate([[ZETA_MIN], np.log(edges[1:])])
    a = config.a

    def integrand(x: np.ndarray, index: np.ndarray) -> np.ndarray:
        logarithmic = (index > 0)[:, None]
        zeta = np.where(logarithmic, np.exp(x), x)
        xi = C * zeta / (2 * a)
        values = zeta_integrals(config, 0.0, xi.ravel(), quantity, tolerance=tolerance)
        return values.reshape(x.shape) * np.where(logarithmic, zeta, 1.0)

    return integrate(integrand, lower, upper, rtol=tolerance)


def free_energy_T0(config: CavityConfig, *, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """Free energy at ``T = 0``; ``config.T`` is ignored."""
    result = _t0_integral(config, "free_energy", tolerance)
    return HBAR * C / (32 * np.pi**2 * config.a**3) * float(result.value.sum())


def pressure_T0(config: CavityConfig, *, tolerance: float = DEFAULT_TOLERANCE) -> PressureResult:
    """Pressure at ``T = 0``; ``config.T`` is ignored except for ``normalized``."""
    result = _t0_integral(config, "pressure", tolerance)
    value = -HBAR * C / (32 * np.pi**2 * config.a**4) * float(result.value.sum())
    panels = int(result.panels.sum())
    logger.info(f"P0(a = {config.a * 1e9:.1f} nm) = {value:.6e} Pa from {panels} panels")
    normalized = (
        abs(value) / float(normalization_B(config.a, config.T)) if config.T > 0 else float("nan")
    )
    return PressureResult(
        value=value,
        truncation_error=result.relative_error,
        l_terms_used=panels,
        normalized=normalized,
    )


def thermal_correction(
    config: CavityConfig,
    *,
    implicit: bool = False,
    tolerance: float = DEFAULT_TOLERANCE,
    reference: PressureResult | None = None,
) -> float:
    """``(P(a, T) - P(a, 0)) / P(a, 0)``.

    With ``implicit`` the finite-temperature pressure keeps only the
    zero-temperature graphene tensor. A precomputed ``P(a, 0)`` may be passed
    as ``reference``.
    """
    p0 = reference if reference is not None else pressure_T0(config, tolerance=tolerance)
    if p0.value == 0:
        raise UndefinedRatioError("P(a, 0) vanishes; thermal correction is undefined")
    pt = pressure(config, tolerance=tolerance, tensor="zero_T" if implicit else "full")
    return (pt.value - p0.value) / p0.value


def entropy(
    config: CavityConfig,
    dT: float,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
    rtol: float = 1e-4,
    levels: int = 4,
    free_energy_at: Callable[[float], float] | None = None,
) -> EntropyResult:
    """``S = -dF/dT`` by central differences refined with a Richardson table.

    Differences with steps ``dT, dT/2, ...`` are combined until two successive
    diagonal entries agree to ``rtol`` or to the noise floor set by the
    Matsubara-sum tolerance.
    """
    T = config.T
    if not 0 < dT < T:
        raise DomainError(f"entropy needs 0 < dT < T, got dT = {dT} K at T = {T} K")
    if free_energy_at is None:

        def free_energy_at(t: float) -> float:
            return free_energy(config.at(T=t), tolerance=tolerance)

    table: list[list[float]] = []
    steps: list[float] = []
    estimate = float("inf")
    for level in range(levels):
        h = dT / 2**level
        upper, lower = free_energy_at(T + h), free_energy_at(T - h)
        row = [-(upper - lower) / (2 * h)]
        for j in range(1, level + 1):
            row.append(row[j - 1] + (row[j - 1] - table[level - 1][j - 1]) / (4**j - 1))
        table.append(row)
        steps.append(h)
        if level == 0:
            continue
        estimate = abs(row[-1] - table[level - 1][-1])
        noise = 10 * tolerance * max(abs(upper), abs(lower)) / h
        if estimate <= max(rtol * abs(row[-1]), noise):
            logger.info(f"S(T = {T} K) = {row[-1]:.6e} J/(m^2 K) after {level + 1} levels")
            return EntropyResult(value=row[-1], error_estimate=estimate, steps=tuple(steps))
    raise NumericalError(f"entropy at T = {T} K did not converge in {levels} levels", estimate)
