"""ldp-bayes command-line factory."""

import inspect
import logging

import click

import ldpbayes.commands as commands
from ldpbayes.extensions import err_console, init_logging
from ldpbayes.settings import Config
from ldpbayes.utils.errors import (
    ConfigError,
    ExperimentFailureError,
    InvalidParameterError,
    NumericFailureError,
    SamplingFailureError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAILURE = 2


def create_cli():
    @click.group(context_settings={"help_option_names": ["-h", "--help"]})
    def cli():
        """Noise-aware Bayesian inference under local differential privacy."""

    register_commands(cli, commands)
    return cli


def register_commands(group, commands_module):
    for _name, obj in inspect.getmembers(commands_module):
        if isinstance(obj, click.Command) and obj is not group:
            group.add_command(obj)


def main(argv=None):
    """Run the CLI and return its exit code."""
    init_logging(Config.LOG_LEVEL)
    cli = create_cli()
    try:
        result = cli.main(args=argv, prog_name="ldp-bayes", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.Abort:
        err_console.print("[red]Aborted.[/red]")
        return EXIT_CONFIG
    except click.ClickException as e:
        e.show()
        return EXIT_CONFIG
    except (ConfigError, InvalidParameterError) as e:
        err_console.print(f"[red]Error:[/red] {e}", markup=True, highlight=False)
        return EXIT_CONFIG
    except (ExperimentFailureError, SamplingFailureError, NumericFailureError) as e:
        err_console.print(f"[red]Failed:[/red] {e}", markup=True, highlight=False)
        return EXIT_FAILURE
    return result if isinstance(result, int) else EXIT_OK
