"""Run configuration files.

A run configuration is TOML with dotted keys; energies are quoted in eV,
separations and roughness in nm, the sphere radius in um. Everything is
converted to SI when the domain records are built::

    T_K = 300.0
    side1.type = "freestanding_graphene"
    side1.graphene.delta_eV = 0.0
    side2.type = "bare_plate"
    side2.material = "Au"
    grid.start_nm = 100
    grid.stop_nm = 1000
    grid.count = 10

``load_run_config("preset:fig1")`` reads one of the configurations shipped with
the package.
"""

import hashlib
import json
import logging
import sys
from importlib import resources
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError

from .constants import NM, UM, V_F_DEFAULT
from .errors import ConfigError, ConfigFileError
from .experiment import GrapheneSampleSpec, SphereProbe, Uncertain
from .graphene import GrapheneSheet
from .lifshitz import DEFAULT_TOLERANCE, CavityConfig
from .materials import MaterialLibrary, PermittivityModel, default_library
from .reflection import (
    BarePlate,
    FreestandingGraphene,
    GrapheneCoatedFilm,
    GrapheneCoatedPlate,
    PlanarStructure,
    TeForm,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

PRESET_PREFIX = "preset:"
# cm^-2 to m^-2
_PER_CM2 = 1e4


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class GrapheneSection(_Section):
    delta_eV: float = Field(default=0.0, ge=0)
    mu_eV: float = Field(default=0.0, ge=0)
    v_F_m_per_s: float = V_F_DEFAULT

    def build(self) -> GrapheneSheet:
        return GrapheneSheet(delta=self.delta_eV, mu=self.mu_eV, v_F=self.v_F_m_per_s)


class SideSection(_Section):
    type: Literal[
        "bare_plate", "freestanding_graphene", "graphene_coated_plate", "graphene_coated_film"
    ]
    material: str | None = None
    graphene: GrapheneSection | None = None
    film_material: str | None = None
    film_thickness_nm: PositiveFloat | None = None
    substrate_material: str | None = None
    te_form: TeForm = "conventional"

    def _require(self, name: str) -> str:
        value = getattr(self, name)
        if value is None:
            raise ConfigError(f"side of type {self.type!r} needs {name!r}")
        return value

    def build(self, library: MaterialLibrary) -> PlanarStructure:
        sheet = (self.graphene or GrapheneSection()).build()
        if self.type == "bare_plate":
            return BarePlate(material=library.get(self._require("material")))
        if self.type == "freestanding_graphene":
            return FreestandingGraphene(graphene=sheet)
        if self.type == "graphene_coated_plate":
            return GrapheneCoatedPlate(
                graphene=sheet, material=library.get(self._require("material"))
            )
        return GrapheneCoatedFilm(
            graphene=sheet,
            film_material=library.get(self._require("film_material")),
            film_thickness=float(self._require("film_thickness_nm")) * NM,
            substrate_material=library.get(self._require("substrate_material")),
            te_form=self.te_form,
        )


class GridSection(_Section):
    start_nm: PositiveFloat | None = None
    stop_nm: PositiveFloat | None = None
    count: PositiveInt = 1
    spacing: Literal["log", "linear"] = "linear"
    points_nm: list[PositiveFloat] | None = None

    def separations(self) -> np.ndarray:
        """Grid in metres."""
        if self.points_nm is not None:
            return np.asarray(self.points_nm, dtype=float) * NM
        if self.start_nm is None:
            raise ConfigError("grid needs either points_nm or start_nm")
        stop = self.stop_nm if self.stop_nm is not None else self.start_nm
        if self.count == 1:
            return np.array([self.start_nm * NM])
        space = np.geomspace if self.spacing == "log" else np.linspace
        return space(self.start_nm, stop, self.count) * NM


class EntropySection(_Section):
    temperatures_K: list[PositiveFloat] = Field(default_factory=lambda: [300.0])
    dT_fraction: float = Field(default=0.1, gt=0, lt=1)


class SphereSection(_Section):
    radius_um: PositiveFloat
    radius_error_um: float = Field(default=0.0, ge=0)
    delta_s_nm: float = Field(default=0.0, ge=0)


class SampleSection(_Section):
    delta_eV: float = Field(ge=0)
    delta_error_eV: float = Field(default=0.0, ge=0)
    mu_eV: float = Field(ge=0)
    mu_error_eV: float = Field(default=0.0, ge=0)
    delta_g_nm: float = Field(default=0.0, ge=0)
    impurity_density_cm2: PositiveFloat | None = None
    impurity_density_error_cm2: float = Field(default=0.0, ge=0)
    v_F_m_per_s: float = V_F_DEFAULT


class ExperimentSection(_Section):
    sphere: SphereSection
    sample: SampleSection
    pfa_policy: Literal["bound", "off"] = "bound"
    margin: float = Field(default=0.005, ge=0, lt=1)
    substrates: list[str] = Field(default_factory=list)
    measurements: str | None = None


class MaterialSection(_Section):
    table: str


class RunConfig(_Section):
    """Validated contents of one configuration file."""

    title: str = ""
    T_K: float = Field(default=300.0, ge=0)
    side1: SideSection
    side2: SideSection
    grid: GridSection = Field(default_factory=GridSection)
    tolerance: float = Field(default=DEFAULT_TOLERANCE, gt=0, lt=1)
    entropy: EntropySection | None = None
    experiment: ExperimentSection | None = None
    materials: dict[str, MaterialSection] = Field(default_factory=dict)
    output: str | None = None
    base_dir: str = Field(default=".", exclude=True)

    def library(self) -> MaterialLibrary:
        library = default_library()
        for name, section in self.materials.items():
            path = Path(section.table)
            if not path.is_absolute():
                path = Path(self.base_dir) / path
            library = library.with_table(name, path)
        return library

    def separations(self) -> np.ndarray:
        return self.grid.separations()

    def cavity(self, a: float | None = None, T: float | None = None) -> CavityConfig:
        library = self.library()
        try:
            return CavityConfig(
                side_1=self.side1.build(library),
                side_2=self.side2.build(library),
                a=float(a if a is not None else self.separations()[0]),
                T=self.T_K if T is None else T,
            )
        except ValidationError as e:
            raise ConfigError(f"invalid cavity: {e}") from e

    def _experiment(self) -> ExperimentSection:
        if self.experiment is None:
            raise ConfigError("configuration has no [experiment] section")
        return self.experiment

    def probe(self) -> SphereProbe:
        sphere = self._experiment().sphere
        return SphereProbe(
            radius=sphere.radius_um * UM,
            radius_error=sphere.radius_error_um * UM,
            delta_s=sphere.delta_s_nm * NM,
        )

    def sample(self) -> GrapheneSampleSpec:
        sample = self._experiment().sample
        density = None
        if sample.impurity_density_cm2 is not None:
            density = Uncertain(
                value=sample.impurity_density_cm2 * _PER_CM2,
                error=sample.impurity_density_error_cm2 * _PER_CM2,
            )
        try:
            return GrapheneSampleSpec(
                delta=Uncertain(value=sample.delta_eV, error=sample.delta_error_eV),
                mu=Uncertain(value=sample.mu_eV, error=sample.mu_error_eV),
                delta_g=sample.delta_g_nm * NM,
                impurity_density=density,
                v_F=sample.v_F_m_per_s,
            )
        except ValidationError as e:
            raise ConfigError(f"invalid sample: {e}") from e

    def substrates(self) -> list[PermittivityModel]:
        library = self.library()
        return [library.get(name) for name in self._experiment().substrates]

    def config_hash(self) -> str:
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _read_source(source: str) -> tuple[str, Path]:
    if source.startswith(PRESET_PREFIX):
        name = source[len(PRESET_PREFIX) :]
        entry = resources.files("graphene_casimir.presets").joinpath(f"{name}.toml")
        if not entry.is_file():
            raise ConfigError(f"unknown preset {name!r} (known: {', '.join(preset_names())})")
        return entry.read_text(encoding="utf-8"), Path(".")
    path = Path(source)
    try:
        return path.read_text(encoding="utf-8"), path.parent
    except OSError as e:
        raise ConfigFileError(f"cannot read configuration {path} ({e})") from e


def preset_names() -> list[str]:
    presets = resources.files("graphene_casimir.presets")
    return sorted(
        entry.name.removesuffix(".toml")
        for entry in presets.iterdir()
        if entry.name.endswith(".toml")
    )


def load_run_config(source: str) -> RunConfig:
    """Parse and validate a configuration file path or ``preset:NAME``."""
    text, base_dir = _read_source(source)
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{source}: {e}") from e
    try:
        config = RunConfig.model_validate(data | {"base_dir": str(base_dir)})
        config.cavity()
    except ValidationError as e:
        raise ConfigError(f"{source}: {e}") from e
    logger.info(f"Loaded configuration {source} ({config.title or 'untitled'})")
    return config
