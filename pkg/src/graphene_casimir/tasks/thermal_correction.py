"""Relative thermal corrections, total and implicit-only."""

from ..constants import NM
from ..errors import ConfigError
from ..lifshitz import pressure_T0, thermal_correction
from ..tables import CsvTable
from .base import BaseTask, TaskInput


class ThermalCorrectionTask(BaseTask):
    name = "thermal-correction"
    description = "delta_T P = (P(a, T) - P(a, 0)) / P(a, 0) with the full and zero-T tensors."
    input_model = TaskInput

    def execute(self, input_data: TaskInput) -> CsvTable:
        config = input_data.config
        if config.T_K == 0 or input_data.t_zero:
            raise ConfigError("thermal correction needs T > 0")

        def evaluate(a: float) -> tuple[float, float]:
            cavity = config.cavity(a=a)
            reference = pressure_T0(cavity, tolerance=config.tolerance)
            total = thermal_correction(cavity, tolerance=config.tolerance, reference=reference)
            implicit = thermal_correction(
                cavity, implicit=True, tolerance=config.tolerance, reference=reference
            )
            return total, implicit

        separations = config.separations()
        table = CsvTable(columns=["a_nm", "delta_T_total", "delta_T_implicit"])
        for a, (total, implicit) in zip(separations, input_data.map_fn(evaluate, separations)):
            table.add_row(a_nm=float(a / NM), delta_T_total=total, delta_T_implicit=implicit)
        return table


thermal_correction_task = ThermalCorrectionTask()
