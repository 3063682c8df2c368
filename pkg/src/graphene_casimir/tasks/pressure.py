"""Pressure sweep over the separation grid."""

import logging

from ..constants import NM
from ..lifshitz import pressure, pressure_T0
from ..tables import CsvTable
from .base import BaseTask, TaskInput

logger = logging.getLogger(__name__)


class PressureTask(BaseTask):
    """
    Casimir pressure at every grid separation.

    With ``t_zero`` (or ``T_K = 0``) the frequency integral replaces the
    Matsubara sum and the ``l_terms`` column counts its quadrature panels.
    """

    name = "pressure"
    description = "Casimir pressure P(a, T) and |P|/B on the separation grid."
    input_model = TaskInput

    def execute(self, input_data: TaskInput) -> CsvTable:
        config = input_data.config
        zero = input_data.t_zero or config.T_K == 0
        separations = config.separations()
        logger.info(f"Computing pressure at {separations.size} separations (T = 0: {zero})")

        def evaluate(a: float):
            cavity = config.cavity(a=a)
            if zero:
                return pressure_T0(cavity, tolerance=config.tolerance)
            return pressure(cavity, tolerance=config.tolerance)

        table = CsvTable(columns=["a_nm", "P_Pa", "P_over_B", "l_terms", "trunc_err"])
        for a, result in zip(separations, input_data.map_fn(evaluate, separations)):
            table.add_row(
                a_nm=float(a / NM),
                P_Pa=result.value,
                P_over_B=result.normalized,
                l_terms=result.l_terms_used,
                trunc_err=result.truncation_error,
            )
        return table


pressure_task = PressureTask()
