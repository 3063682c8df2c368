"""Theory bands and comparison with measured force gradients."""

import logging
from pathlib import Path

from ..errors import ConfigError
from ..experiment import (
    TheoryBand,
    band_table,
    compare,
    ingest_measurements,
    report_table,
    theory_band,
)
from ..tables import CsvTable
from .base import BaseTask, TaskInput

logger = logging.getLogger(__name__)


class CompareInput(TaskInput):
    measurements: str | None = None


def _band(input_data: TaskInput, T: float) -> TheoryBand:
    config = input_data.config
    if config.experiment is None:
        raise ConfigError("band computations need an [experiment] section")
    experiment = config.experiment
    return theory_band(
        config.probe(),
        config.sample(),
        config.cavity(),
        T,
        config.separations(),
        pfa_policy=experiment.pfa_policy,
        margin=experiment.margin,
        substrates=config.substrates(),
        tolerance=config.tolerance,
        map_fn=input_data.map_fn,
    )


class BandTask(BaseTask):
    """Force-gradient band at the configured temperature, or at T = 0 with ``t_zero``."""

    name = "band"
    description = "Sphere-plate force-gradient band over the sample uncertainties."
    input_model = TaskInput

    def execute(self, input_data: TaskInput) -> CsvTable:
        T = 0.0 if input_data.t_zero else input_data.config.T_K
        band = _band(input_data, T)
        table = band_table(band)
        table.comments.append(f"T = {T} K")
        table.comments.extend(band.provenance)
        return table


class CompareTask(BaseTask):
    name = "compare"
    description = "Place measured gradients against the finite-T and T = 0 bands."
    input_model = CompareInput

    def execute(self, input_data: CompareInput) -> CsvTable:
        config = input_data.config
        path = input_data.measurements
        if path is None and config.experiment is not None:
            path = config.experiment.measurements
            if path is not None and not Path(path).is_absolute():
                path = str(Path(config.base_dir) / path)
        if path is None:
            raise ConfigError("no measurements file given")
        if config.T_K == 0:
            raise ConfigError("comparison needs T > 0 for the finite-temperature band")

        measurements = ingest_measurements(path)
        band_T = _band(input_data, config.T_K)
        band_T0 = _band(input_data, 0.0)
        report = compare(measurements, band_T, band_T0)
        table = report_table(report)
        table.comments.insert(0, f"measurements: {path}")
        table.comments.append(
            f"fraction inside the T = {config.T_K} K band: {report.fraction_inside_T_band:.3f}"
        )
        return table


band_task = BandTask()
compare_task = CompareTask()
