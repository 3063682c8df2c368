"""Sphere-plate force gradients and comparison with measured data.

Gradients are positive for an attractive plate-plate pressure; the CSV boundary
quotes them in uN/m and separations in nm.
"""

import csv
import logging
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, model_validator
from scipy.interpolate import PchipInterpolator
from typing_extensions import Self

from .constants import EV, HBAR, NM, V_F_DEFAULT
from .errors import (
    DomainError,
    InputError,
    MeasurementFormatError,
    MeasurementValidationError,
)
from .graphene import GrapheneSheet
from .lifshitz import DEFAULT_TOLERANCE, CavityConfig, pressure, pressure_T0
from .materials import PermittivityModel
from .tables import CsvTable

logger = logging.getLogger(__name__)

PFA_WARNING_RATIO = 0.02
# optical data and sphere radius, aggregated
OPTICAL_MARGIN = 0.005
MICRO = 1e-6

MEASUREMENT_COLUMNS = ["a_nm", "grad_uN_per_m", "err_uN_per_m"]
BAND_COLUMNS = ["a_nm", "lower_uN_per_m", "upper_uN_per_m"]
REPORT_COLUMNS = [
    "a_nm",
    "measured",
    "err",
    "inside_T_band",
    "inside_T0_band",
    "thermal_residual",
]

PfaPolicy = Literal["bound", "off"]
Mapper = Callable[..., Iterator]


class _Record(BaseModel):
    model_config = ConfigDict(frozen=True)


class SphereProbe(_Record):
    radius: PositiveFloat = Field(description="Sphere radius, m")
    radius_error: float = Field(default=0.0, ge=0, description="m")
    delta_s: float = Field(default=0.0, ge=0, description="Sphere roughness, m")


class Uncertain(_Record):
    """A central value with a symmetric absolute error."""

    value: float
    error: float = Field(default=0.0, ge=0)

    @property
    def lower(self) -> float:
        return self.value - self.error

    @property
    def upper(self) -> float:
        return self.value + self.error


class GrapheneSampleSpec(_Record):
    """Graphene parameters of a sample: ``delta`` and ``mu`` in eV, ``delta_g`` in m."""

    delta: Uncertain
    mu: Uncertain
    delta_g: float = Field(default=0.0, ge=0)
    impurity_density: Uncertain | None = Field(default=None, description="1/m^2")
    v_F: float = V_F_DEFAULT

    @model_validator(mode="after")
    def density_matches_mu(self) -> Self:
        if self.delta.lower < 0 or self.mu.lower < 0:
            raise ValueError("delta and mu intervals must stay non-negative")
        if self.impurity_density is not None:
            mu = chemical_potential_from_density(self.impurity_density.value, self.v_F)
            if abs(mu - self.mu.value) > self.mu.error + 1e-3:
                raise ValueError(
                    f"mu = {self.mu.value} eV is inconsistent with the impurity "
                    f"density, which gives {mu:.4f} eV"
                )
        return self

    def sheet(self, delta: float, mu: float) -> GrapheneSheet:
        return GrapheneSheet(delta=delta, mu=mu, v_F=self.v_F)

    @property
    def central(self) -> GrapheneSheet:
        return self.sheet(self.delta.value, self.mu.value)


class MeasurementRecord(_Record):
    """One measured point: ``a`` in m, gradient and error in N/m."""

    a: PositiveFloat
    force_gradient: float
    total_error: PositiveFloat


@dataclass(frozen=True)
class TheoryBand:
    """Force-gradient band in N/m over ``separations`` (m).

    ``central`` is the roughness-corrected gradient at the central sample
    parameters, without margins.
    """

    separations: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    central: np.ndarray
    T: float
    provenance: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if np.any(self.lower > self.upper):
            raise DomainError("band lower edge exceeds the upper edge")

    def _interpolate(self, values: np.ndarray, a: np.ndarray) -> np.ndarray:
        if self.separations.size == 1:
            return np.full(a.shape, values[0])
        if np.all(values > 0):
            return np.exp(PchipInterpolator(self.separations, np.log(values))(a))
        return np.interp(a, self.separations, values)

    def at(self, a: float | np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(lower, upper, central)`` interpolated monotonically in log-gradient."""
        a = np.atleast_1d(np.asarray(a, dtype=float))
        lo, hi = self.separations[0], self.separations[-1]
        if np.any((a < lo * (1 - 1e-12)) | (a > hi * (1 + 1e-12))):
            raise DomainError(
                f"separations outside the band range [{lo / NM:.1f}, {hi / NM:.1f}] nm"
            )
        return (
            self._interpolate(self.lower, a),
            self._interpolate(self.upper, a),
            self._interpolate(self.central, a),
        )


@dataclass(frozen=True)
class ComparisonRow:
    a: float
    measured: float
    error: float
    inside_T_band: bool
    inside_T0_band: bool
    thermal_residual: float


@dataclass(frozen=True)
class ComparisonReport:
    """Per-point comparison plus band-separation summary.

    ``disjoint_up_to`` is the largest band separation of the leading run where
    the finite-T band lies wholly above the T = 0 band; ``crossover`` is the
    interpolated separation where the two bands first touch.
    """

    rows: tuple[ComparisonRow, ...]
    disjoint_up_to: float | None
    crossover: float | None

    @property
    def fraction_inside_T_band(self) -> float:
        return sum(row.inside_T_band for row in self.rows) / len(self.rows)


def chemical_potential_from_density(n_bar: float, v_F: float = V_F_DEFAULT) -> float:
    """``hbar v_F (pi n_bar)^(1/2)`` in eV for an impurity density in 1/m^2."""
    if n_bar <= 0:
        raise DomainError(f"impurity density must be positive, got {n_bar}")
    return HBAR * v_F * float(np.sqrt(np.pi * n_bar)) / EV


def pfa_error_bound(a: float | np.ndarray, R: float) -> float | np.ndarray:
    """Upper bound ``a / R`` of the relative PFA error."""
    return a / R


def pfa_gradient(R: float, pressure_value: float, a: float) -> float:
    if a / R > PFA_WARNING_RATIO:
        logger.warning(
            f"a/R = {a / R:.3f} exceeds {PFA_WARNING_RATIO}; PFA error may be significant"
        )
    return -2 * np.pi * R * pressure_value


def pfa_force_gradient(
    probe: SphereProbe,
    config: CavityConfig,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> float:
    """Sphere-plate force gradient ``-2 pi R P``, N/m; ``T = 0`` takes the integral path."""
    result = (
        pressure_T0(config, tolerance=tolerance)
        if config.T == 0
        else pressure(config, tolerance=tolerance)
    )
    return pfa_gradient(probe.radius, result.value, config.a)


def roughness_factor(a: float, delta_s: float, delta_g: float) -> float:
    if a <= 0:
        raise DomainError(f"separation must be positive, got {a}")
    return 1.0 + 10.0 * (delta_s**2 + delta_g**2) / a**2


def _corner_structure(
    template: CavityConfig, sheet: GrapheneSheet, substrate: PermittivityModel | None
) -> CavityConfig:
    sides = []
    for structure in (template.side_1, template.side_2):
        if structure.sheet is not None:
            structure = structure.with_sheet(sheet)
            if substrate is not None:
                structure = structure.with_substrate(substrate)
        sides.append(structure)
    return template.model_copy(update={"side_1": sides[0], "side_2": sides[1]})


def theory_band(
    probe: SphereProbe,
    sample: GrapheneSampleSpec,
    template: CavityConfig,
    T: float,
    separations: Sequence[float],
    *,
    pfa_policy: PfaPolicy = "bound",
    margin: float = OPTICAL_MARGIN,
    substrates: Sequence[PermittivityModel] | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
    map_fn: Mapper = map,
) -> TheoryBand:
    """Force-gradient band over the sample's parameter uncertainties.

    The upper edge uses ``(mu_max, delta_min)`` inflated by ``margin`` with the
    PFA value left uncorrected; the lower edge uses ``(mu_min, delta_max)``
    deflated by ``margin`` and, with ``pfa_policy="bound"``, multiplied by
    ``1 - a/R``. Both edges carry the roughness factor. With several
    ``substrates`` the envelope over them is taken.
    """
    separations = np.asarray(separations, dtype=float)
    if separations.size == 0 or np.any(np.diff(separations) <= 0):
        raise DomainError("band separations must be non-empty and strictly increasing")
    corners = {
        "upper": sample.sheet(sample.delta.lower, sample.mu.upper),
        "lower": sample.sheet(sample.delta.upper, sample.mu.lower),
        "central": sample.central,
    }
    swept: Sequence[PermittivityModel | None] = list(substrates) if substrates else [None]
    jobs = [
        (name, index, a)
        for name in corners
        for index in range(len(swept))
        for a in separations
    ]

    def evaluate(job: tuple[str, int, float]) -> float:
        name, index, a = job
        config = _corner_structure(template, corners[name], swept[index]).at(a=a, T=T)
        return pfa_force_gradient(probe, config, tolerance=tolerance)

    logger.info(
        f"band at T = {T} K: {len(corners)} corners x {len(swept)} substrates x "
        f"{separations.size} separations"
    )
    values = np.array(list(map_fn(evaluate, jobs))).reshape(
        len(corners), len(swept), separations.size
    )
    rough = np.array(
        [roughness_factor(a, probe.delta_s, sample.delta_g) for a in separations]
    )
    upper = values[0].max(axis=0) * rough * (1 + margin)
    lower = values[1].min(axis=0) * rough * (1 - margin)
    if pfa_policy == "bound":
        lower = lower * (1 - pfa_error_bound(separations, probe.radius))
    central = values[2].mean(axis=0) * rough
    provenance = (
        f"upper: delta = {sample.delta.lower} eV, mu = {sample.mu.upper} eV",
        f"lower: delta = {sample.delta.upper} eV, mu = {sample.mu.lower} eV",
        f"substrates swept: {len(swept)}",
    )
    return TheoryBand(
        separations=separations,
        lower=np.minimum(lower, upper),
        upper=np.maximum(lower, upper),
        central=central,
        T=T,
        provenance=provenance,
    )


def _band_gap(band_T: TheoryBand, band_T0: TheoryBand) -> np.ndarray:
    """``lower_T - upper_T0`` on the finite-T band grid."""
    _, upper0, _ = band_T0.at(band_T.separations)
    return band_T.lower - upper0


def band_separation(band_T: TheoryBand, band_T0: TheoryBand) -> tuple[float | None, float | None]:
    """Largest separation of the leading disjoint run and the interpolated crossover."""
    gap = _band_gap(band_T, band_T0)
    a = band_T.separations
    if gap[0] <= 0:
        return None, None
    touching = np.nonzero(gap <= 0)[0]
    if touching.size == 0:
        return float(a[-1]), None
    j = int(touching[0])
    crossover = a[j - 1] + (a[j] - a[j - 1]) * gap[j - 1] / (gap[j - 1] - gap[j])
    return float(a[j - 1]), float(crossover)


def compare(
    measurements: Sequence[MeasurementRecord],
    band_T: TheoryBand,
    band_T0: TheoryBand,
) -> ComparisonReport:
    """Place each measurement against both bands.

    The thermal residual of a point is the measured gradient minus the T = 0
    gradient at the central sample parameters.
    """
    if not measurements:
        raise InputError("no measurements to compare")
    a = np.array([m.a for m in measurements])
    measured = np.array([m.force_gradient for m in measurements])
    error = np.array([m.total_error for m in measurements])
    lower_T, upper_T, _ = band_T.at(a)
    lower_0, upper_0, central_0 = band_T0.at(a)

    def overlaps(lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
        return (measured + error >= lower) & (measured - error <= upper)

    inside_T = overlaps(lower_T, upper_T)
    inside_0 = overlaps(lower_0, upper_0)
    rows = tuple(
        ComparisonRow(
            a=float(a[i]),
            measured=float(measured[i]),
            error=float(error[i]),
            inside_T_band=bool(inside_T[i]),
            inside_T0_band=bool(inside_0[i]),
            thermal_residual=float(measured[i] - central_0[i]),
        )
        for i in range(a.size)
    )
    disjoint_up_to, crossover = band_separation(band_T, band_T0)
    report = ComparisonReport(rows=rows, disjoint_up_to=disjoint_up_to, crossover=crossover)
    logger.info(
        f"{int(inside_T.sum())}/{a.size} points inside the T = {band_T.T} K band, "
        f"{int(inside_0.sum())}/{a.size} inside the T = {band_T0.T} K band"
    )
    return report


def observed_thermal_fractions(theory_T: TheoryBand, theory_T0: TheoryBand) -> np.ndarray:
    """``(G_T - G_0) / G_T`` of the central curves at the finite-T band separations."""
    _, _, central_0 = theory_T0.at(theory_T.separations)
    return (theory_T.central - central_0) / theory_T.central


def _parse_rows(lines: Iterable[str]) -> Iterator[tuple[int, list[str]]]:
    for number, line in enumerate(lines, start=1):
        content = line.split("#", 1)[0].strip()
        if content:
            yield number, next(csv.reader([content]))


def ingest_measurements(path: str | Path) -> list[MeasurementRecord]:
    """Read ``a_nm,grad_uN_per_m,err_uN_per_m`` rows into SI records sorted by ``a``."""
    path = Path(path)
    source = str(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise MeasurementFormatError(f"cannot read measurements ({e})", source=source)

    rows = _parse_rows(lines)
    header = next(rows, None)
    if header is None:
        raise InputError(f"{source}: no measurements found")
    line, fields = header
    if [f.strip() for f in fields] != MEASUREMENT_COLUMNS:
        raise MeasurementFormatError(
            f"expected header {','.join(MEASUREMENT_COLUMNS)}", row=line, source=source
        )

    records = []
    for line, fields in rows:
        if len(fields) != len(MEASUREMENT_COLUMNS):
            raise MeasurementFormatError(
                f"expected {len(MEASUREMENT_COLUMNS)} fields, found {len(fields)}",
                row=line,
                source=source,
            )
        try:
            a_nm, grad, err = (float(f) for f in fields)
        except ValueError:
            raise MeasurementFormatError(
                f"cannot parse {','.join(fields)!r}", row=line, source=source
            )
        if not a_nm > 0:
            raise MeasurementValidationError(
                f"separation must be positive, got {a_nm} nm", row=line, source=source
            )
        if not err > 0:
            raise MeasurementValidationError(
                f"error must be positive, got {err}", row=line, source=source
            )
        records.append(
            MeasurementRecord(
                a=a_nm * NM, force_gradient=grad * MICRO, total_error=err * MICRO
            )
        )
    if not records:
        raise InputError(f"{source}: no measurements found")
    logger.info(f"Read {len(records)} measurements from {source}")
    return sorted(records, key=lambda r: r.a)


def band_table(band: TheoryBand) -> CsvTable:
    table = CsvTable(columns=list(BAND_COLUMNS))
    for a, lo, hi in zip(band.separations, band.lower, band.upper):
        table.add_row(
            a_nm=float(a / NM),
            lower_uN_per_m=float(lo / MICRO),
            upper_uN_per_m=float(hi / MICRO),
        )
    return table


def report_table(report: ComparisonReport) -> CsvTable:
    table = CsvTable(columns=list(REPORT_COLUMNS))
    for row in report.rows:
        table.add_row(
            a_nm=row.a / NM,
            measured=row.measured / MICRO,
            err=row.error / MICRO,
            inside_T_band=row.inside_T_band,
            inside_T0_band=row.inside_T0_band,
            thermal_residual=row.thermal_residual / MICRO,
        )
    if report.disjoint_up_to is not None:
        table.comments.append(f"bands disjoint up to a = {report.disjoint_up_to / NM:.1f} nm")
    if report.crossover is not None:
        table.comments.append(f"band crossover at a = {report.crossover / NM:.1f} nm")
    return table
