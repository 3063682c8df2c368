"""Listing the material library and checking user tables."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, model_validator
from typing_extensions import Self

from ..config import RunConfig
from ..materials import default_library, eval_permittivity, load_material_table
from ..tables import CsvTable
from .base import BaseTask

SAMPLE_FREQUENCIES = (1e14, 1e15, 1e16)


class MaterialsInput(BaseModel):
    """``list`` shows the library (with any tables the config registers); ``check`` reads ``path``."""

    model_config = ConfigDict(frozen=True)

    action: Literal["list", "check"] = "list"
    path: str | None = None
    config: RunConfig | None = None

    @model_validator(mode="after")
    def check_needs_path(self) -> Self:
        if self.action == "check" and not self.path:
            raise ValueError("'check' needs the path of a material table")
        return self


class MaterialsTask(BaseTask):
    name = "materials"
    description = "List permittivity models or validate a two-column table."
    input_model = MaterialsInput

    def execute(self, input_data: MaterialsInput) -> CsvTable:
        if input_data.action == "check":
            table_model = load_material_table(input_data.path)
            table = CsvTable(columns=["xi_rad_per_s", "epsilon"])
            for xi, eps in zip(table_model.xi, table_model.epsilon):
                table.add_row(xi_rad_per_s=xi, epsilon=eps)
            table.comments.append(f"{input_data.path}: {len(table_model.xi)} rows valid")
            return table

        library = input_data.config.library() if input_data.config else default_library()
        columns = ["name", "kind", "provenance"] + [f"eps_{xi:.0e}" for xi in SAMPLE_FREQUENCIES]
        table = CsvTable(columns=columns)
        for name in library.names():
            entry = library.entries[name]
            epsilons = {
                f"eps_{xi:.0e}": eval_permittivity(entry.model, xi) for xi in SAMPLE_FREQUENCIES
            }
            table.add_row(
                name=name, kind=entry.model.kind, provenance=entry.provenance, **epsilons
            )
        return table


materials_task = MaterialsTask()
