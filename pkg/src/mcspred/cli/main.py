import logging
import warnings
from typing import Optional

import click

from mcspred import __version__
from mcspred.output import get_output_handler
from mcspred.cli.types import CLIContext, OutputMode


@click.group(
    context_settings={
        'help_option_names': ['-h', '--help'],
    },
)
@click.option('--output', type=click.Choice(['json', 'console']), default='console',
              help='Set the output style of the command results.')
@click.option('--config', 'config_file', type=click.Path(dir_okay=False), default=None,
              help='A YAML config file. Defaults to $MCSPRED_CONFIG or '
                   'config.yaml in the user config directory.')
@click.option('--debug', is_flag=True, help='Enable debug logging.')
@click.version_option(version=__version__)
@click.pass_context
def main(ctx: click.Context, output: str, config_file: Optional[str], debug: bool) -> None:
    """
    MCS prediction with variable-order Markov models.
    """
    logging.basicConfig(
        level=logging.DEBUG if debug else logging.WARNING,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )
    output_mode = OutputMode(output)
    cli_ctx = CLIContext(
        output_mode=output_mode,
        config_file=config_file,
        debug=debug,
    )
    cli_ctx.output = get_output_handler(cli_ctx, output_mode)
    ctx.obj = cli_ctx

    from .pretty import show_warning
    warnings.showwarning = show_warning
