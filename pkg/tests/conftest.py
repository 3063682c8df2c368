"""Shared fixtures for the graphene-casimir test suite."""

import logging

import numpy as np
import pytest

from graphene_casimir.graphene import GrapheneSheet
from graphene_casimir.lifshitz import CavityConfig
from graphene_casimir.materials import default_library
from graphene_casimir.reflection import BarePlate, FreestandingGraphene, GrapheneCoatedPlate

logger = logging.getLogger(__name__)

SEED = 20240611


@pytest.fixture
def library():
    return default_library()


@pytest.fixture
def gold(library):
    return library.get("Au")


@pytest.fixture
def silica(library):
    return library.get("SiO2")


@pytest.fixture
def pristine():
    return GrapheneSheet()


@pytest.fixture
def real_sheet():
    return GrapheneSheet(delta=0.29, mu=0.24)


@pytest.fixture
def rng():
    logger.info(f"random seed {SEED}")
    return np.random.default_rng(SEED)


@pytest.fixture
def pristine_pair(pristine):
    def build(a: float = 1e-6, T: float = 300.0) -> CavityConfig:
        sheet = FreestandingGraphene(graphene=pristine)
        return CavityConfig(side_1=sheet, side_2=sheet, a=a, T=T)

    return build


@pytest.fixture
def gold_vs_coated(gold, silica, real_sheet):
    def build(a: float = 300e-9, T: float = 300.0) -> CavityConfig:
        return CavityConfig(
            side_1=BarePlate(material=gold),
            side_2=GrapheneCoatedPlate(graphene=real_sheet, material=silica),
            a=a,
            T=T,
        )

    return build


@pytest.fixture
def write_measurements(tmp_path):
    def write(rows, name: str = "data.csv", header: str = "a_nm,grad_uN_per_m,err_uN_per_m"):
        path = tmp_path / name
        lines = [header] + [",".join(str(v) for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return write
