"""Single-operator commands: analyze, junta, weighted and dynamics."""

from __future__ import annotations

import click

from qboolean import formats
from qboolean.commands import CliState, build_run_config, execute
from qboolean.exceptions import QBooleanError

INPUT_FILE = click.Path(exists=True, dir_okay=False)


def _qubit_count(path: str) -> int:
    try:
        return formats.load_operator(path).n
    except QBooleanError as e:
        raise click.UsageError(str(e))


@click.command('analyze')
@click.option('--input', 'input_path', required=True, type=INPUT_FILE, help='Operator JSON file.')
@click.pass_obj
def analyze(state: CliState, input_path: str) -> None:
    """Influence profile, norms and every single-operator inequality."""
    n = _qubit_count(input_path)
    execute(build_run_config(state, 'analyze', (n, n), 1, {'input': input_path}))


@click.command('junta')
@click.option('--input', 'input_path', required=True, type=INPUT_FILE, help='Operator JSON file.')
@click.option('--eps', type=float, required=True, help='Precision in (0, 2].')
@click.option('--boolean', is_flag=True, help='Also sign-round to a quantum Boolean junta.')
@click.pass_obj
def junta(state: CliState, input_path: str, eps: float, boolean: bool) -> None:
    """Friedgut junta extraction."""
    n = _qubit_count(input_path)
    options = {'input': input_path, 'eps': eps, 'boolean': boolean}
    execute(build_run_config(state, 'junta', (n, n), 1, options))


@click.command('weighted')
@click.option('--omega', 'q', type=float, default=None, help='Diagonal state diag(q, 1-q).')
@click.option('--omega-file', type=INPUT_FILE, default=None, help='JSON file {"re": [[..]], "im": [[..]]}.')
@click.option('--n', 'n', type=click.IntRange(1, 3), default=2, show_default=True)
@click.option('--tol', 'axiom_tol', type=float, default=1e-8, show_default=True, help='Axiom check tolerance.')
@click.option('--trials', type=click.IntRange(0), default=5, show_default=True)
@click.pass_obj
def weighted(state: CliState, q: float | None, omega_file: str | None, n: int, axiom_tol: float, trials: int) -> None:
    """Semigroup axioms and general Poincaré on a weighted algebra."""
    if (q is None) == (omega_file is None):
        raise click.UsageError('Give exactly one of --omega and --omega-file.')
    if q is not None:
        omega = {'re': [[q, 0.0], [0.0, 1.0 - q]], 'im': [[0.0, 0.0], [0.0, 0.0]]}
    else:
        try:
            omega = formats.read_json(omega_file)
            formats.parse_omega(omega)
        except QBooleanError as e:
            raise click.UsageError(str(e))
    options = {'omega': omega, 'q': q, 'tol': axiom_tol}
    execute(build_run_config(state, 'weighted', (n, n), trials, options))


@click.command('dynamics')
@click.option('--n', 'n', type=click.IntRange(1, 10), default=6, show_default=True)
@click.option('--time', 'time_', type=float, default=1.0, show_default=True)
@click.option('--site', type=int, default=None, help='Qubit carrying the Pauli (default n // 2).')
@click.option('--pauli', type=click.IntRange(1, 3), default=3, show_default=True)
@click.option('--jx', type=float, default=1.0, show_default=True)
@click.option('--jz', type=float, default=1.0, show_default=True)
@click.option('--h', 'field', type=float, default=0.5, show_default=True)
@click.pass_obj
def dynamics(
    state: CliState, n: int, time_: float, site: int | None, pauli: int, jx: float, jz: float, field: float,
) -> None:
    """Influence spread of a Heisenberg-evolved single-site Pauli."""
    site = n // 2 if site is None else site
    if not 0 <= site < n:
        raise click.UsageError(f'Site {site} out of range for n={n}.')
    options = {'time': time_, 'site': site, 'pauli': pauli, 'jx': jx, 'jz': jz, 'h': field}
    execute(build_run_config(state, 'dynamics', (n, n), 1, options))


commands = [analyze, junta, weighted, dynamics]
