"""Batch commands: verify, learn, ensemble and replay."""

from __future__ import annotations

from dataclasses import replace

import click

from qboolean import formats, pipeline
from qboolean.commands import QUBIT_RANGE, CliState, build_run_config, execute
from qboolean.exceptions import QBooleanError
from qboolean.models import Family


@click.command('verify')
@click.option('--suite', 'suite_name', type=click.Choice([*sorted(pipeline.SUITES), 'all']), default='all',
              show_default=True)
@click.option('--n', 'n_range', type=QUBIT_RANGE, default='1..4', show_default=True, help='Qubit range LO..HI.')
@click.option('--trials', type=click.IntRange(0), default=None, help='Instances per qubit count.')
@click.option('--gamma', type=float, default=0.3, show_default=True, help='Goldreich-Levin threshold.')
@click.option('--delta', type=float, default=0.1, show_default=True, help='Learning failure probability.')
@click.pass_obj
def verify(
    state: CliState, suite_name: str, n_range: tuple[int, int], trials: int | None, gamma: float, delta: float,
) -> None:
    """Run a verification suite over seeded random and structured operators."""
    options = {
        'suite': suite_name,
        't_grid': list(state.settings.T_GRID),
        'eps_grid': list(state.settings.EPS_GRID),
        'gamma': gamma,
        'delta': delta,
    }
    trials = state.settings.DEFAULT_TRIALS if trials is None else trials
    execute(build_run_config(state, 'verify', n_range, trials, options))


@click.command('learn')
@click.option('--hidden', required=True, type=click.Path(exists=True, dir_okay=False), help='Hidden operator JSON.')
@click.option('--gamma', type=float, default=None, help='Search threshold; defaults to eps * 2^-k.')
@click.option('--delta', type=float, default=0.1, show_default=True)
@click.option('--eps', type=float, default=0.5, show_default=True)
@click.option('--degree', type=click.IntRange(0), default=None, help='Use the low-degree learner.')
@click.option('--cd', type=float, default=None, help='Bohnenblust-Hille constant; defaults to calibration.')
@click.option('--k-hint', type=click.IntRange(0), default=2, show_default=True)
@click.option('--trials', type=click.IntRange(1), default=1, show_default=True)
@click.pass_obj
def learn(
    state: CliState,
    hidden: str,
    gamma: float | None,
    delta: float,
    eps: float,
    degree: int | None,
    cd: float | None,
    k_hint: int,
    trials: int,
) -> None:
    """Learn a hidden operator through the simulated oracle."""
    try:
        n = formats.load_operator(hidden).n
    except QBooleanError as e:
        raise click.UsageError(str(e))
    options = {
        'hidden': hidden, 'gamma': gamma, 'delta': delta, 'eps': eps,
        'degree': degree, 'cd': cd, 'k_hint': k_hint,
    }
    execute(build_run_config(state, 'learn', (n, n), trials, options))


@click.command('ensemble')
@click.option('--family', type=click.Choice([family.value for family in Family]), required=True)
@click.option('--n', 'n', type=click.IntRange(1, 10), required=True)
@click.option('--count', type=click.IntRange(1), default=1, show_default=True)
@click.option('--rank', type=click.IntRange(0), default=None)
@click.option('--width', type=click.IntRange(1), default=None)
@click.option('--time', 'time_', type=float, default=None)
@click.option('--site', type=click.IntRange(0), default=None)
@click.option('--pauli', type=click.IntRange(1, 3), default=None)
@click.option('--truth-table', default=None, help='Comma-separated ±1 values for classical_custom.')
@click.pass_obj
def ensemble(
    state: CliState,
    family: str,
    n: int,
    count: int,
    rank: int | None,
    width: int | None,
    time_: float | None,
    site: int | None,
    pauli: int | None,
    truth_table: str | None,
) -> None:
    """Materialize ensemble members to operator files."""
    params = {'rank': rank, 'width': width, 'time': time_, 'site': site, 'pauli': pauli}
    if truth_table is not None:
        try:
            params['truth_table'] = [int(value) for value in truth_table.split(',')]
        except ValueError:
            raise click.UsageError(f"Truth table '{truth_table}' must be comma-separated integers.")
    params = {key: value for key, value in params.items() if value is not None}
    options = {'family': family, 'count': count, 'params': params}
    execute(build_run_config(state, 'ensemble', (n, n), count, options))


@click.command('replay')
@click.argument('run_config', type=click.Path(exists=True, dir_okay=False))
@click.option('--out', 'out_dir', default=None, help='Write to another directory.')
def replay(run_config: str, out_dir: str | None) -> None:
    """Re-execute a stored run_config.json."""
    try:
        config = formats.load_run_config(run_config)
    except QBooleanError as e:
        raise click.UsageError(str(e))
    if out_dir is not None:
        config = replace(config, out_dir=out_dir)
    execute(config)


commands = [verify, learn, ensemble, replay]
