import logging
import os
import sys
# DON'T CHANGE THIS !!!
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

import click

from src.commands.exponents import exponents_cmd
from src.commands.exterior import exterior_cmd
from src.commands.output import fail
from src.commands.phase import phase_cmd
from src.commands.profile import profile_cmd
from src.commands.sweep import sweep_cmd
from src.commands.verify import verify_cmd
from src.config import load_options

LOG_FORMAT = "[%(asctime)s][%(name)-5s][%(levelname)-5s] %(message)s (%(filename)s:%(lineno)d)"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"


@click.group()
@click.option('--verbose', is_flag=True, help='Debug logging on stderr')
@click.option('--quiet', is_flag=True, help='Errors only on stderr')
@click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False), default=None,
              help='JSON file overriding solver options')
@click.pass_context
def cli(ctx, verbose, quiet, config_file):
    """Slow decay solutions of -Delta u + mu u / |x|^2 = u^p."""
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.WARNING
    logging.basicConfig(format=LOG_FORMAT, datefmt=LOG_DATEFMT, level=level, stream=sys.stderr, force=True)
    try:
        ctx.obj = {'opts': load_options(config_file)}
    except Exception as e:
        fail(e)


cli.add_command(exponents_cmd)
cli.add_command(profile_cmd)
cli.add_command(phase_cmd)
cli.add_command(sweep_cmd)
cli.add_command(exterior_cmd)
cli.add_command(verify_cmd)


if __name__ == '__main__':
    cli()
