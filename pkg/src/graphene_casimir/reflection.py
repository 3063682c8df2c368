"""TM/TE reflection coefficients of the planar structures bounding the cavity.

Polarization values enter divided by hbar, so every formula below is the usual
graphene-coated-semispace expression with ``hbar`` cancelled out.
"""

import logging
from dataclasses import dataclass
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, model_validator
from typing_extensions import Self

from .constants import C
from .errors import DomainError
from .graphene import GrapheneSheet, PolarizationValues, StaticLimit, polarization_at
from .materials import (
    PermittivityModel,
    Vacuum,
    eps_xi_squared,
    permittivity,
    wavenumber,
)

logger = logging.getLogger(__name__)

TensorChoice = Literal["full", "zero_T"]
TeForm = Literal["conventional", "printed"]


class _Structure(BaseModel):
    model_config = ConfigDict(frozen=True)

    @property
    def sheet(self) -> GrapheneSheet | None:
        return None

    def with_sheet(self, sheet: GrapheneSheet) -> "PlanarStructure":
        raise DomainError(f"{type(self).__name__} carries no graphene sheet")

    def with_substrate(self, material: PermittivityModel) -> "PlanarStructure":
        raise DomainError(f"{type(self).__name__} has no substrate to replace")


class BarePlate(_Structure):
    kind: Literal["bare_plate"] = "bare_plate"
    material: PermittivityModel

    def with_sheet(self, sheet: GrapheneSheet) -> "PlanarStructure":
        return GrapheneCoatedPlate(graphene=sheet, material=self.material)

    def with_substrate(self, material: PermittivityModel) -> "PlanarStructure":
        return self.model_copy(update={"material": material})


class FreestandingGraphene(_Structure):
    kind: Literal["freestanding_graphene"] = "freestanding_graphene"
    graphene: GrapheneSheet

    @property
    def sheet(self) -> GrapheneSheet:
        return self.graphene

    def with_sheet(self, sheet: GrapheneSheet) -> "PlanarStructure":
        return self.model_copy(update={"graphene": sheet})


class GrapheneCoatedPlate(_Structure):
    kind: Literal["graphene_coated_plate"] = "graphene_coated_plate"
    graphene: GrapheneSheet
    material: PermittivityModel

    @property
    def sheet(self) -> GrapheneSheet:
        return self.graphene

    def with_sheet(self, sheet: GrapheneSheet) -> "PlanarStructure":
        return self.model_copy(update={"graphene": sheet})

    def with_substrate(self, material: PermittivityModel) -> "PlanarStructure":
        return self.model_copy(update={"material": material})


class GrapheneCoatedFilm(_Structure):
    """Graphene on a film of thickness ``film_thickness`` (m) covering a substrate."""

    kind: Literal["graphene_coated_film"] = "graphene_coated_film"
    graphene: GrapheneSheet
    film_material: PermittivityModel
    film_thickness: PositiveFloat
    substrate_material: PermittivityModel
    te_form: TeForm = "conventional"

    @model_validator(mode="after")
    def note_printed_form(self) -> Self:
        if self.te_form == "printed":
            logger.warning(
                "film/substrate TE coefficient uses the (k_f - eps_f k_s)/(k_f + eps_f k_s) form"
            )
        return self

    @property
    def sheet(self) -> GrapheneSheet:
        return self.graphene

    def with_sheet(self, sheet: GrapheneSheet) -> "PlanarStructure":
        return self.model_copy(update={"graphene": sheet})

    def with_substrate(self, material: PermittivityModel) -> "PlanarStructure":
        return self.model_copy(update={"substrate_material": material})


PlanarStructure = Annotated[
    Union[BarePlate, FreestandingGraphene, GrapheneCoatedPlate, GrapheneCoatedFilm],
    Field(discriminator="kind"),
]


@dataclass(frozen=True)
class ReflectionPair:
    """``r_tm`` and ``r_te`` on the broadcast ``(xi, k_perp)`` grid.

    ``r_te_spread`` is set where the graphene ``Pi`` came from the ``xi -> 0+``
    extrapolation and holds the resulting uncertainty of ``r_te``.
    """

    r_tm: np.ndarray
    r_te: np.ndarray
    r_te_spread: np.ndarray | None = None


def _grid(xi: float | np.ndarray, k_perp: float | np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    xi_arr, k_arr = np.broadcast_arrays(
        np.asarray(xi, dtype=float), np.asarray(k_perp, dtype=float)
    )
    if np.any(xi_arr < 0):
        raise DomainError("imaginary frequency must be non-negative")
    if np.any(k_arr <= 0):
        raise DomainError("reflection coefficients need k_perp > 0")
    q = np.sqrt(k_arr * k_arr + (xi_arr / C) ** 2)
    return xi_arr, k_arr, q


def _sheet_on_medium(
    pi00: np.ndarray | float,
    pi: np.ndarray | float,
    material: PermittivityModel,
    xi: np.ndarray,
    k_perp: np.ndarray,
    q: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    eps = permittivity(material, xi)
    divergent = np.isinf(eps)
    eps = np.where(divergent, 1.0, eps)
    K = wavenumber(material, xi, k_perp)
    k2 = k_perp * k_perp
    r_tm = (k2 * (eps * q - K) + q * K * pi00) / (k2 * (eps * q + K) + q * K * pi00)
    r_te = (k2 * (q - K) - pi) / (k2 * (q + K) + pi)
    # static metal limit
    r_tm = np.where(divergent, 1.0, r_tm)
    return r_tm, r_te


def pair_from_polarization(
    values: PolarizationValues,
    material: PermittivityModel,
    xi: float | np.ndarray,
    k_perp: float | np.ndarray,
) -> ReflectionPair:
    """Coefficients of a sheet with the given tensor on a semispace of ``material``."""
    xi, k_perp, q = _grid(xi, k_perp)
    r_tm, r_te = _sheet_on_medium(
        values.pi00_over_hbar, values.pi_over_hbar, material, xi, k_perp, q
    )
    spread = None
    if values.static_spread is not None:
        _, shifted = _sheet_on_medium(
            values.pi00_over_hbar,
            values.pi_over_hbar + values.static_spread,
            material,
            xi,
            k_perp,
            q,
        )
        spread = np.abs(shifted - r_te)
    return ReflectionPair(r_tm=r_tm, r_te=r_te, r_te_spread=spread)


def fresnel_pair(
    material: PermittivityModel, xi: float | np.ndarray, k_perp: float | np.ndarray
) -> ReflectionPair:
    """Bare semispace; a free-carrier ``epsilon`` gives ``r_tm = 1`` at ``xi = 0``.

    At ``xi = 0`` the TE coefficient follows the material's tail: zero for a
    Drude metal, ``(k - (k^2 + omega_p^2/c^2)^(1/2)) / (k + ...)`` for a plasma one.
    """
    xi, k_perp, q = _grid(xi, k_perp)
    r_tm, r_te = _sheet_on_medium(0.0, 0.0, material, xi, k_perp, q)
    return ReflectionPair(r_tm=r_tm, r_te=r_te)


def graphene_coated_pair(
    sheet: GrapheneSheet,
    material: PermittivityModel,
    xi: float | np.ndarray,
    k_perp: float | np.ndarray,
    T: float,
    *,
    tensor: TensorChoice = "full",
    rtol: float = 1e-9,
    static_limit: StaticLimit = "richardson",
) -> ReflectionPair:
    values = polarization_at(
        sheet, xi, k_perp, T, tensor=tensor, rtol=rtol, static_limit=static_limit
    )
    return pair_from_polarization(values, material, xi, k_perp)


def freestanding_pair(
    sheet: GrapheneSheet,
    xi: float | np.ndarray,
    k_perp: float | np.ndarray,
    T: float,
    *,
    tensor: TensorChoice = "full",
    rtol: float = 1e-9,
    static_limit: StaticLimit = "richardson",
) -> ReflectionPair:
    xi, k_perp, q = _grid(xi, k_perp)
    values = polarization_at(
        sheet, xi, k_perp, T, tensor=tensor, rtol=rtol, static_limit=static_limit
    )
    two_k2 = 2.0 * k_perp * k_perp
    q_pi00 = q * values.pi00_over_hbar

    def te(pi: np.ndarray) -> np.ndarray:
        return -pi / (two_k2 * q + pi)

    r_te = te(values.pi_over_hbar)
    spread = None
    if values.static_spread is not None:
        spread = np.abs(te(values.pi_over_hbar + values.static_spread) - r_te)
    return ReflectionPair(r_tm=q_pi00 / (two_k2 + q_pi00), r_te=r_te, r_te_spread=spread)


def interface_pair(
    upper: PermittivityModel,
    lower: PermittivityModel,
    xi: float | np.ndarray,
    k_perp: float | np.ndarray,
    *,
    te_form: TeForm = "conventional",
) -> ReflectionPair:
    """Reflection at the boundary between two semispaces, seen from ``upper``."""
    xi, k_perp, _ = _grid(xi, k_perp)
    eps_u = permittivity(upper, xi)
    eps_l = permittivity(lower, xi)
    K_u = wavenumber(upper, xi, k_perp)
    K_l = wavenumber(lower, xi, k_perp)
    inf_u, inf_l = np.isinf(eps_u), np.isinf(eps_l)
    with np.errstate(invalid="ignore"):
        r_tm = (eps_l * K_u - eps_u * K_l) / (eps_l * K_u + eps_u * K_l)
        # both divergent at xi = 0: compare the finite products eps xi^2
        e2_u, e2_l = eps_xi_squared(upper, xi), eps_xi_squared(lower, xi)
        r_both = (e2_l * K_u - e2_u * K_l) / (e2_l * K_u + e2_u * K_l)
        if te_form == "printed":
            r_te = (K_u - eps_u * K_l) / (K_u + eps_u * K_l)
            r_te = np.where(inf_u, -1.0, r_te)
        else:
            r_te = (K_u - K_l) / (K_u + K_l)
    r_tm = np.where(inf_l & ~inf_u, 1.0, r_tm)
    r_tm = np.where(inf_u & ~inf_l, -1.0, r_tm)
    r_tm = np.where(inf_u & inf_l, r_both, r_tm)
    return ReflectionPair(r_tm=r_tm, r_te=r_te)


def compose_layer(
    top: np.ndarray, bottom: np.ndarray, attenuation: np.ndarray
) -> np.ndarray:
    """``(R + r e) / (1 + R r e)`` for a layer with round-trip factor ``e``."""
    return (top + bottom * attenuation) / (1.0 + top * bottom * attenuation)


def film_on_substrate_pair(
    sheet: GrapheneSheet,
    film: PermittivityModel,
    D: float,
    substrate: PermittivityModel,
    xi: float | np.ndarray,
    k_perp: float | np.ndarray,
    T: float,
    *,
    te_form: TeForm = "conventional",
    tensor: TensorChoice = "full",
    rtol: float = 1e-9,
    static_limit: StaticLimit = "richardson",
) -> ReflectionPair:
    if D <= 0:
        raise DomainError(f"film thickness must be positive, got {D} m")
    top = graphene_coated_pair(
        sheet, film, xi, k_perp, T, tensor=tensor, rtol=rtol, static_limit=static_limit
    )
    bottom = interface_pair(film, substrate, xi, k_perp, te_form=te_form)
    attenuation = np.exp(-2.0 * D * wavenumber(film, xi, k_perp))
    r_te = compose_layer(top.r_te, bottom.r_te, attenuation)
    spread = None
    if top.r_te_spread is not None:
        shifted = compose_layer(top.r_te + top.r_te_spread, bottom.r_te, attenuation)
        spread = np.abs(shifted - r_te)
    return ReflectionPair(
        r_tm=compose_layer(top.r_tm, bottom.r_tm, attenuation), r_te=r_te, r_te_spread=spread
    )


def reflection_pair(
    structure: PlanarStructure,
    xi: float | np.ndarray,
    k_perp: float | np.ndarray,
    T: float,
    *,
    tensor: TensorChoice = "full",
    rtol: float = 1e-9,
    static_limit: StaticLimit = "richardson",
) -> ReflectionPair:
    """Dispatch on the structure variant."""
    options = dict(tensor=tensor, rtol=rtol, static_limit=static_limit)
    if isinstance(structure, BarePlate):
        return fresnel_pair(structure.material, xi, k_perp)
    if isinstance(structure, FreestandingGraphene):
        return freestanding_pair(structure.graphene, xi, k_perp, T, **options)
    if isinstance(structure, GrapheneCoatedPlate):
        return graphene_coated_pair(
            structure.graphene, structure.material, xi, k_perp, T, **options
        )
    if isinstance(structure, GrapheneCoatedFilm):
        return film_on_substrate_pair(
            structure.graphene,
            structure.film_material,
            structure.film_thickness,
            structure.substrate_material,
            xi,
            k_perp,
            T,
            te_form=structure.te_form,
            **options,
        )
    raise DomainError(f"unknown structure {structure!r}")


def is_transparent(structure: PlanarStructure) -> bool:
    """True for a bare vacuum half-space, which reflects nothing."""
    return isinstance(structure, BarePlate) and isinstance(structure.material, Vacuum)
