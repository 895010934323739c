"""Command-line commands and shared helpers."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any

import click

from qboolean import formats, pipeline
from qboolean.exceptions import QBooleanError
from qboolean.models import RunConfig, Tolerances


@dataclass(frozen=True)
class CliState:
    """Global options resolved against the active configuration class."""

    settings: type
    seed: int
    tolerances: Tolerances
    out_dir: str
    fmt: str
    workers: int


class QubitRange(click.ParamType):
    """Qubit range written 'LO..HI' or a single count."""

    name = 'range'

    def convert(self, value: Any, param: click.Parameter | None, ctx: click.Context | None) -> tuple[int, int]:
        if isinstance(value, tuple):
            return value
        try:
            if '..' in str(value):
                low, high = (int(part) for part in str(value).split('..', 1))
            else:
                low = high = int(value)
        except ValueError:
            self.fail(f"'{value}' is not a qubit range like 2..5", param, ctx)
        if not 1 <= low <= high:
            self.fail(f"'{value}' is not an increasing range of positive counts", param, ctx)
        return low, high


QUBIT_RANGE = QubitRange()


def resolve_state(
    settings: type,
    seed: int | None,
    tol: float | None,
    out: str | None,
    fmt: str,
    workers: int | None,
) -> CliState:
    tolerances = settings.tolerances()
    if tol is not None:
        tolerances = replace(tolerances, psd=tol)
    return CliState(
        settings=settings,
        seed=settings.DEFAULT_SEED if seed is None else seed,
        tolerances=tolerances,
        out_dir=settings.OUTPUT_DIR if out is None else out,
        fmt=fmt,
        workers=settings.WORKERS if workers is None else workers,
    )


def build_run_config(
    state: CliState,
    subcommand: str,
    n_range: tuple[int, int],
    trials: int,
    options: dict[str, Any],
) -> RunConfig:
    """Assemble a RunConfig from global state and command options.

    Raises:
        click.UsageError: If the configuration is invalid
    """
    try:
        return RunConfig(
            subcommand=subcommand,
            n_min=n_range[0],
            n_max=n_range[1],
            trials=trials,
            seed=state.seed,
            tolerances=state.tolerances,
            out_dir=state.out_dir,
            fmt=state.fmt,
            calibration=state.settings.calibration(),
            workers=state.workers,
            options={key: value for key, value in options.items() if value is not None},
        )
    except QBooleanError as e:
        raise click.UsageError(str(e))
    except Exception as e:
        raise click.UsageError(f'Failed to build run configuration: {e}')


def execute(config: RunConfig) -> None:
    """Run a pipeline and exit with its status.

    Library errors become usage errors (exit 2); asserted failures exit 1.
    """
    try:
        status = pipeline.run(config)
    except QBooleanError as e:
        raise click.UsageError(str(e))
    click.echo(f'Report: {formats.report_path(config.out_dir, config.subcommand, config.fmt)}')
    if status:
        click.echo('Asserted checks failed; see the error log and report.', err=True)
    click.get_current_context().exit(status)
