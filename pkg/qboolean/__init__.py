"""Command-line application factory and configuration."""

from __future__ import annotations

import logging
import os

import click
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def create_cli(config_name: str | None = None) -> click.Group:
    """Create and configure the command-line application.

    Args:
        config_name: Configuration to use ('development', 'production', 'testing')

    Returns:
        click.Group: Configured command group
    """
    # Load configuration
    if config_name is None:
        config_name = os.getenv('QBOOLEAN_ENV', 'development')

    from config import config
    settings = config[config_name]

    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )

    from qboolean.commands import resolve_state

    @click.group()
    @click.option('--config-name', type=click.Choice(sorted(config)), default=None,
                  help='Override the configuration class.')
    @click.option('--seed', type=int, default=None, help='Root seed.')
    @click.option('--tol', type=float, default=None, help='Slack for inequality and PSD checks.')
    @click.option('--out', default=None, help='Report directory.')
    @click.option('--format', 'fmt', type=click.Choice(['json', 'csv']), default='json', show_default=True)
    @click.option('--workers', type=click.IntRange(1), default=None, help='Threads for fan-out.')
    @click.option('--verbose', is_flag=True, help='Log at DEBUG level.')
    @click.pass_context
    def cli(
        ctx: click.Context,
        config_name: str | None,
        seed: int | None,
        tol: float | None,
        out: str | None,
        fmt: str,
        workers: int | None,
        verbose: bool,
    ) -> None:
        """Fourier analysis of quantum Boolean functions."""
        active = config[config_name] if config_name else settings
        if verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        ctx.obj = resolve_state(active, seed, tol, out, fmt, workers)

    # Register commands
    from qboolean.commands import analysis, experiments
    for command in [*analysis.commands, *experiments.commands]:
        cli.add_command(command)

    return cli
