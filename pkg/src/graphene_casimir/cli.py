"""
Command-line interface for graphene-casimir.

Usage:
    graphene-casimir --config preset:fig1 thermal-correction
    graphene-casimir --config run.toml --threads 4 --out p.csv pressure
    graphene-casimir --config preset:fig5 compare data.csv
    graphene-casimir materials list

Every subcommand writes one CSV table. Exit codes: 0 success, 2 invalid
configuration or input, 3 numerical failure, 4 unreadable or unwritable file.
"""

from dataclasses import dataclass

import click

from .config import RunConfig, load_run_config, preset_names
from .errors import CasimirError, ConfigError
from .runner import Runner
from .tasks import ALL_TASKS


@dataclass
class _Options:
    config: str | None
    out: str | None
    tolerance: float | None
    threads: int
    t_zero: bool
    verbose: bool


def _runner(options: _Options) -> Runner:
    runner = Runner(verbose=options.verbose, threads=options.threads)
    for task in ALL_TASKS:
        runner.add_task(task)
    return runner


def _load(options: _Options, required: bool = True) -> RunConfig | None:
    if options.config is None:
        if required:
            raise ConfigError(
                f"--config is required (a TOML file or preset:NAME; presets: "
                f"{', '.join(preset_names())})"
            )
        return None
    config = load_run_config(options.config)
    if options.tolerance is not None:
        config = config.model_copy(update={"tolerance": options.tolerance})
    return config


def _run(ctx: click.Context, task_name: str, required: bool = True, **kwargs: object) -> None:
    options: _Options = ctx.obj
    runner = _runner(options)
    try:
        config = _load(options, required)
    except CasimirError as e:
        ctx.exit(runner.report_error(e))
    if task_name != "materials":
        kwargs["t_zero"] = options.t_zero
    ctx.exit(runner.run(task_name, out=options.out, config=config, **kwargs))


@click.group()
@click.option("--config", "config_path", help="Run configuration: a TOML file or preset:NAME.")
@click.option("--out", type=click.Path(dir_okay=False), help="Write the CSV here instead of stdout.")
@click.option(
    "--tolerance",
    type=click.FloatRange(min=0, max=1, min_open=True, max_open=True),
    help="Relative tolerance, overriding the configuration.",
)
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--t-zero", is_flag=True, help="Evaluate at T = 0 instead of the configured T.")
@click.option("--verbose", is_flag=True, help="Log progress of the numerics.")
@click.pass_context
def cli(
    ctx: click.Context,
    config_path: str | None,
    out: str | None,
    tolerance: float | None,
    threads: int,
    t_zero: bool,
    verbose: bool,
) -> None:
    """Thermal Casimir pressure, entropy and force gradients for real graphene."""
    ctx.obj = _Options(config_path, out, tolerance, threads, t_zero, verbose)


@cli.command()
@click.pass_context
def pressure(ctx: click.Context) -> None:
    """Pressure and |P|/B on the separation grid."""
    _run(ctx, "pressure")


@cli.command("thermal-correction")
@click.pass_context
def thermal_correction(ctx: click.Context) -> None:
    """Relative thermal correction, total and implicit-only."""
    _run(ctx, "thermal-correction")


@cli.command()
@click.pass_context
def entropy(ctx: click.Context) -> None:
    """Entropy at the configured temperatures."""
    _run(ctx, "entropy")


@cli.command()
@click.pass_context
def band(ctx: click.Context) -> None:
    """Sphere-plate force-gradient band."""
    _run(ctx, "band")


@cli.command()
@click.argument("measurements", required=False, type=click.Path(dir_okay=False))
@click.pass_context
def compare(ctx: click.Context, measurements: str | None) -> None:
    """Compare MEASUREMENTS (CSV a_nm,grad_uN_per_m,err_uN_per_m) with both bands."""
    _run(ctx, "compare", measurements=measurements)


@cli.command()
@click.argument("action", type=click.Choice(["list", "check"]), default="list")
@click.argument("path", required=False, type=click.Path(dir_okay=False))
@click.pass_context
def materials(ctx: click.Context, action: str, path: str | None) -> None:
    """List the material library or check a two-column table at PATH."""
    _run(ctx, "materials", required=False, action=action, path=path)


def main() -> None:
    cli(prog_name="graphene-casimir")


if __name__ == "__main__":
    main()
