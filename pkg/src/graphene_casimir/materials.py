"""Dielectric permittivities of bulk layer materials along the imaginary axis.

Each model is a frozen pydantic record tagged by ``kind``; evaluation is done
by the module-level functions so that arrays of frequencies are handled in one
numpy pass. A free-carrier term makes ``epsilon(0)`` divergent; that case is
returned as ``DIVERGENT`` (``+inf``) and the finite product ``epsilon * xi^2``
is offered separately for wave-number calculations.
"""

import logging
import math
from pathlib import Path
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, model_validator
from typing_extensions import Self

from .constants import EV, HBAR, C
from .errors import ConfigError, DomainError, MaterialFormatError, MaterialValidationError

logger = logging.getLogger(__name__)

DIVERGENT: float = math.inf


class _Model(BaseModel):
    model_config = ConfigDict(frozen=True)


class Vacuum(_Model):
    kind: Literal["vacuum"] = "vacuum"


class Drude(_Model):
    """``1 + omega_p^2 / (xi (xi + gamma))``."""

    kind: Literal["drude"] = "drude"
    omega_p: PositiveFloat = Field(description="Plasma frequency, rad/s")
    gamma: float = Field(ge=0, description="Relaxation frequency, rad/s")


class Plasma(_Model):
    """``1 + omega_p^2 / xi^2``."""

    kind: Literal["plasma"] = "plasma"
    omega_p: PositiveFloat = Field(description="Plasma frequency, rad/s")


class OscillatorTerm(_Model):
    strength: float = Field(ge=0, description="Oscillator strength C_j")
    omega: PositiveFloat = Field(description="Resonance frequency, rad/s")
    damping: float = Field(default=0.0, ge=0, description="Damping g_j, rad/s")


class Oscillator(_Model):
    """``1 + sum_j C_j w_j^2 / (w_j^2 + xi^2 + g_j xi)``."""

    kind: Literal["oscillator"] = "oscillator"
    terms: tuple[OscillatorTerm, ...] = Field(min_length=1)


class Tabulated(_Model):
    """Table of ``(xi, epsilon)`` nodes, linear in ``epsilon`` over ``log xi``.

    Values beyond either end of the table are clamped to the boundary node.
    """

    kind: Literal["tabulated"] = "tabulated"
    xi: tuple[float, ...] = Field(min_length=2)
    epsilon: tuple[float, ...] = Field(min_length=2)

    @model_validator(mode="after")
    def nodes_must_be_ordered(self) -> Self:
        if len(self.xi) != len(self.epsilon):
            raise ValueError("xi and epsilon columns differ in length")
        xi = np.asarray(self.xi)
        eps = np.asarray(self.epsilon)
        if xi[0] <= 0:
            raise ValueError("tabulated frequencies must be positive")
        if np.any(np.diff(xi) <= 0):
            raise ValueError("tabulated frequencies must be strictly increasing")
        if np.any(eps < 1):
            raise ValueError("tabulated permittivity must be >= 1")
        if np.any(np.diff(eps) >= 0):
            raise ValueError("tabulated permittivity must be strictly decreasing")
        return self


class DopedSemiconductor(_Model):
    """Core response plus a free-carrier term ``omega_p^2 / xi^2``."""

    kind: Literal["doped_semiconductor"] = "doped_semiconductor"
    core: Annotated[Union[Oscillator, Tabulated], Field(discriminator="kind")]
    omega_p: PositiveFloat = Field(description="Free-carrier plasma frequency, rad/s")


PermittivityModel = Annotated[
    Union[Vacuum, Drude, Plasma, Oscillator, Tabulated, DopedSemiconductor],
    Field(discriminator="kind"),
]

ZeroFrequencyTail = Literal["drude", "plasma"]


def _as_frequencies(xi: float | np.ndarray) -> np.ndarray:
    values = np.asarray(xi, dtype=float)
    if np.any(values < 0):
        raise DomainError("permittivity is defined for xi >= 0 only")
    return values


def _bound_permittivity(model: PermittivityModel, xi: np.ndarray) -> np.ndarray:
    """Permittivity without any free-carrier term (finite everywhere)."""
    if isinstance(model, Oscillator):
        total = np.ones_like(xi)
        for term in model.terms:
            w2 = term.omega * term.omega
            total = total + term.strength * w2 / (w2 + xi * xi + term.damping * xi)
        return total
    if isinstance(model, Tabulated):
        with np.errstate(divide="ignore"):
            log_xi = np.log(xi)
        return np.interp(log_xi, np.log(model.xi), model.epsilon)
    return np.ones_like(xi)


def permittivity(model: PermittivityModel, xi: float | np.ndarray) -> np.ndarray:
    """``epsilon(i xi)`` for an array of frequencies; ``+inf`` marks divergence."""
    xi = _as_frequencies(xi)
    with np.errstate(divide="ignore"):
        if isinstance(model, Drude):
            return 1.0 + model.omega_p**2 / (xi * (xi + model.gamma))
        if isinstance(model, Plasma):
            return 1.0 + model.omega_p**2 / (xi * xi)
        if isinstance(model, DopedSemiconductor):
            return _bound_permittivity(model.core, xi) + model.omega_p**2 / (xi * xi)
    return _bound_permittivity(model, xi)


def eval_permittivity(model: PermittivityModel, xi: float) -> float:
    """Scalar ``epsilon(i xi)``; returns ``DIVERGENT`` at ``xi = 0`` for metals."""
    return float(permittivity(model, xi))


def eps_xi_squared(model: PermittivityModel, xi: float | np.ndarray) -> np.ndarray:
    """The product ``epsilon(i xi) xi^2``, finite also at ``xi = 0``."""
    xi = _as_frequencies(xi)
    xi2 = xi * xi
    if isinstance(model, Drude):
        with np.errstate(invalid="ignore", divide="ignore"):
            carrier = np.where(
                xi > 0,
                model.omega_p**2 * xi / (xi + model.gamma),
                model.omega_p**2 if model.gamma == 0 else 0.0,
            )
        return xi2 + carrier
    if isinstance(model, Plasma):
        return xi2 + model.omega_p**2
    if isinstance(model, DopedSemiconductor):
        return _bound_permittivity(model.core, xi) * xi2 + model.omega_p**2
    return _bound_permittivity(model, xi) * xi2


def wavenumber(
    model: PermittivityModel, xi: float | np.ndarray, k_perp: float | np.ndarray
) -> np.ndarray:
    """``k = (k_perp^2 + epsilon xi^2 / c^2)^(1/2)`` inside the material."""
    k_perp = np.asarray(k_perp, dtype=float)
    return np.sqrt(k_perp * k_perp + eps_xi_squared(model, xi) / (C * C))


def zero_frequency_tail(model: PermittivityModel) -> ZeroFrequencyTail | None:
    """Which free-carrier behaviour governs ``xi -> 0``, if any."""
    if isinstance(model, Drude):
        return "drude" if model.gamma > 0 else "plasma"
    if isinstance(model, (Plasma, DopedSemiconductor)):
        return "plasma"
    return None


def load_material_table(path: str | Path) -> Tabulated:
    """Read a two-column ``xi_rad_per_s epsilon`` table.

    Lines starting with ``#`` and blank lines are ignored. Row numbers in error
    messages are 1-based file line numbers.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise MaterialFormatError(f"cannot read material table ({e})", source=str(path))

    xi: list[float] = []
    eps: list[float] = []
    for row, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        fields = content.split()
        if len(fields) != 2:
            raise MaterialFormatError(
                f"expected 2 columns, found {len(fields)}", row=row, source=str(path)
            )
        try:
            x, e = float(fields[0]), float(fields[1])
        except ValueError:
            raise MaterialFormatError(
                f"cannot parse numbers from {content!r}", row=row, source=str(path)
            )
        if x <= 0 or (xi and x <= xi[-1]):
            raise MaterialFormatError(
                f"xi = {x:g} is not strictly ascending", row=row, source=str(path)
            )
        if e < 1:
            raise MaterialValidationError(
                f"epsilon = {e:g} is below 1", row=row, source=str(path)
            )
        if eps and e >= eps[-1]:
            raise MaterialValidationError(
                f"epsilon = {e:g} does not decrease with xi", row=row, source=str(path)
            )
        xi.append(x)
        eps.append(e)

    if len(xi) < 2:
        raise MaterialFormatError("a table needs at least 2 rows", source=str(path))
    logger.info(f"Loaded {len(xi)} permittivity nodes from {path}")
    return Tabulated(xi=tuple(xi), epsilon=tuple(eps))


class LibraryEntry(_Model):
    model: PermittivityModel
    provenance: str = ""


class MaterialLibrary(_Model):
    """Named permittivity models with a provenance note per entry."""

    entries: dict[str, LibraryEntry] = Field(default_factory=dict)

    def get(self, name: str) -> PermittivityModel:
        try:
            return self.entries[name].model
        except KeyError:
            known = ", ".join(sorted(self.entries))
            raise ConfigError(f"unknown material {name!r} (known: {known})")

    def names(self) -> list[str]:
        return sorted(self.entries)

    def with_entry(
        self, name: str, model: PermittivityModel, provenance: str = ""
    ) -> "MaterialLibrary":
        entries = dict(self.entries)
        entries[name] = LibraryEntry(model=model, provenance=provenance)
        return MaterialLibrary(entries=entries)

    def with_table(self, name: str, path: str | Path) -> "MaterialLibrary":
        return self.with_entry(name, load_material_table(path), f"table {path}")


SI_PLASMA_RANGE = (5e14, 11e14)

_EV_FREQUENCY = EV / HBAR

SIO2 = Oscillator(
    terms=(
        OscillatorTerm(strength=1.703, omega=1.88e14),
        OscillatorTerm(strength=1.098, omega=2.033e16),
    )
)
SI_CORE = Oscillator(terms=(OscillatorTerm(strength=10.87, omega=6.6e15),))


def default_library() -> MaterialLibrary:
    """Library shipped with the package."""
    au_drude = Drude(omega_p=9.0 * _EV_FREQUENCY, gamma=0.035 * _EV_FREQUENCY)
    au_plasma = Plasma(omega_p=9.0 * _EV_FREQUENCY)
    library = MaterialLibrary()
    for name, model, provenance in (
        ("vacuum", Vacuum(), "exact"),
        ("Au", au_drude, "Drude, omega_p = 9.0 eV, gamma = 0.035 eV"),
        ("Au_plasma", au_plasma, "plasma, omega_p = 9.0 eV"),
        ("SiO2", SIO2, "two-oscillator IR + UV fit, static epsilon 3.80"),
        ("Si", SI_CORE, "single-oscillator intrinsic Si, static epsilon 11.87"),
        (
            "Si_doped_low",
            DopedSemiconductor(core=SI_CORE, omega_p=SI_PLASMA_RANGE[0]),
            "B-doped Si, omega_p = 5e14 rad/s",
        ),
        (
            "Si_doped_high",
            DopedSemiconductor(core=SI_CORE, omega_p=SI_PLASMA_RANGE[1]),
            "B-doped Si, omega_p = 11e14 rad/s",
        ),
        (
            "ideal_metal_proxy",
            Oscillator(terms=(OscillatorTerm(strength=1e8 - 1.0, omega=1e22),)),
            "flat epsilon = 1e8 up to 1e22 rad/s",
        ),
    ):
        library = library.with_entry(name, model, provenance)
    return library
