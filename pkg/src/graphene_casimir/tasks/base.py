"""Base classes for the computations exposed on the command line."""

from abc import ABC, abstractmethod
from collections.abc import Callable
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from ..config import RunConfig
from ..tables import CsvTable


class TaskInput(BaseModel):
    """Inputs shared by every task working from a run configuration.

    ``map_fn`` evaluates independent grid points; the runner passes the ``map``
    of its thread pool, results come back in input order.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    config: RunConfig
    t_zero: bool = False
    map_fn: Callable[..., Any] = Field(default=map, exclude=True)


class BaseTask(ABC):
    """
    Abstract base class for tasks.

    Tasks inherit from this class and implement ``execute``. ``input_model`` is
    the pydantic model describing the task's parameters; calling the task
    validates keyword arguments against it first.
    """

    name: str
    description: str
    input_model: type[BaseModel] = TaskInput

    def __call__(self, **kwargs: Any) -> CsvTable:
        """Execute the task with validated input."""
        validated_input = self.input_model(**kwargs)
        return self.execute(validated_input)

    @abstractmethod
    def execute(self, input_data: Any) -> CsvTable:
        """Run the computation and return its result table."""
