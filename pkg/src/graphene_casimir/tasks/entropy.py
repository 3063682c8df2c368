"""Entropy scan over temperature at the first grid separation."""

import logging

from ..config import EntropySection
from ..lifshitz import entropy
from ..tables import CsvTable
from .base import BaseTask, TaskInput

logger = logging.getLogger(__name__)


class EntropyTask(BaseTask):
    name = "entropy"
    description = "S(a, T) = -dF/dT at the temperatures listed in the [entropy] section."
    input_model = TaskInput

    def execute(self, input_data: TaskInput) -> CsvTable:
        config = input_data.config
        section = config.entropy or EntropySection(temperatures_K=[config.T_K or 300.0])
        a = float(config.separations()[0])
        logger.info(f"Entropy at a = {a * 1e9:.1f} nm for T = {section.temperatures_K} K")

        def evaluate(T: float):
            cavity = config.cavity(a=a, T=T)
            return entropy(cavity, section.dT_fraction * T, tolerance=config.tolerance)

        temperatures = [float(T) for T in section.temperatures_K]
        table = CsvTable(columns=["T_K", "S_J_per_m2K", "err_est"])
        for T, result in zip(temperatures, input_data.map_fn(evaluate, temperatures)):
            table.add_row(T_K=T, S_J_per_m2K=result.value, err_est=result.error_estimate)
        return table


entropy_task = EntropyTask()
