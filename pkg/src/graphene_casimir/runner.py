"""Task runner shared by all subcommands."""

import logging
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any

import click
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from .config import RunConfig
from .errors import CasimirError, ConfigError
from .tables import CsvTable
from .tasks import BaseTask


class Runner:
    """
    Runs registered tasks and turns their tables into CSV output.

    The runner owns the console, the logging set-up and the thread pool used
    to evaluate independent grid points. Errors raised by the library are
    reported on the console and converted into process exit codes.
    """

    def __init__(self, verbose: bool = False, threads: int = 1, console: Console | None = None):
        """
        Initialize the runner.

        Args:
            verbose: Log progress at INFO level through rich
            threads: Worker threads for grid evaluation (1 runs serially)
            console: Console for messages (defaults to stderr)
        """
        if threads < 1:
            raise ConfigError(f"--threads must be at least 1, got {threads}")
        self.verbose = verbose
        self.threads = threads
        self.tasks: dict[str, BaseTask] = {}
        self.console = console or Console(stderr=True)

        self._setup_logging()

    def _setup_logging(self) -> None:
        """Configure logging based on verbose setting."""
        if self.verbose:
            logging.basicConfig(
                level=logging.INFO,
                format="%(message)s",
                handlers=[RichHandler(console=self.console, show_time=True)],
            )
        else:
            logging.basicConfig(level=logging.WARNING)

        self.logger = logging.getLogger(__name__)

    def add_task(self, task: BaseTask) -> None:
        self.tasks[task.name] = task
        if self.verbose:
            self.logger.info(f"Added task: {task.name}")

    def report_error(self, error: CasimirError) -> int:
        """Print ``error`` and return its exit code."""
        self.console.print(f"Error: {error}", style="bold red", soft_wrap=True, markup=False)
        if self.verbose:
            self.logger.error(f"{type(error).__name__}, exit code {error.exit_code}")
        return error.exit_code

    def _header(self, task: BaseTask, config: RunConfig | None) -> list[str]:
        lines = [f"graphene-casimir {task.name}"]
        if config is not None:
            lines.append(f"config sha256 {config.config_hash()}")
            lines.append(f"tolerance {config.tolerance:g}")
            if config.title:
                lines.append(config.title)
        return lines

    def _execute(self, task: BaseTask, kwargs: dict[str, Any]) -> CsvTable:
        # input models without a map_fn field ignore it
        if self.threads == 1:
            return task(map_fn=map, **kwargs)

        with ThreadPoolExecutor(max_workers=self.threads) as pool:

            def pool_map(fn: Callable[[Any], Any], items: Iterable[Any]) -> Iterator[Any]:
                return pool.map(fn, list(items))

            if self.verbose:
                self.logger.info(f"Evaluating grid points on {self.threads} threads")
            return task(map_fn=pool_map, **kwargs)

    def run(self, task_name: str, out: str | Path | None = None, **kwargs: Any) -> int:
        """
        Run one task and emit its CSV.

        The table goes to ``out``, else to the configuration's ``output`` path,
        else to standard output. Returns the process exit code.
        """
        if task_name not in self.tasks:
            self.console.print(f"Task '{task_name}' not found", style="bold red")
            return ConfigError.exit_code
        task = self.tasks[task_name]
        config: RunConfig | None = kwargs.get("config")

        try:
            if self.verbose:
                self.logger.info(f"Executing task: {task_name}")
            try:
                table = self._execute(task, kwargs)
            except ValidationError as e:
                raise ConfigError(f"invalid input for {task_name}: {e}") from e
            table.comments[:0] = self._header(task, config)

            target = out if out is not None else (config.output if config else None)
            if target is None:
                click.echo(table.render(), nl=False)
            else:
                path = table.write(target)
                self.console.print(f"Wrote {len(table.rows)} rows to {path}", style="bold green")
        except CasimirError as e:
            return self.report_error(e)

        if self.verbose:
            self.logger.info(f"Task {task_name} executed successfully")
        return 0
