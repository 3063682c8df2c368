"""Computations exposed as command-line subcommands."""

from .band import band_task, compare_task
from .base import BaseTask, TaskInput
from .entropy import entropy_task
from .materials import materials_task
from .pressure import pressure_task
from .thermal_correction import thermal_correction_task

ALL_TASKS: tuple[BaseTask, ...] = (
    pressure_task,
    thermal_correction_task,
    entropy_task,
    band_task,
    compare_task,
    materials_task,
)

__all__ = [
    "ALL_TASKS",
    "BaseTask",
    "TaskInput",
    "band_task",
    "compare_task",
    "entropy_task",
    "materials_task",
    "pressure_task",
    "thermal_correction_task",
]
