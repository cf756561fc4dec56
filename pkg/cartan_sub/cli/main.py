"""Command-line entry point."""
import logging
import sys
from typing import List, Optional
import click
from cartan_sub import __version__
from cartan_sub.cli import certificates, geometry, numerics, report, scenarios
from cartan_sub.cli.common import FORMATS, REPORT_FILE
from cartan_sub.core.errors import EXIT_OK, EXIT_USAGE
from cartan_sub.core.logging import setup_logging

logger = logging.getLogger(__name__)


@click.group()
@click.version_option(__version__, prog_name="cartan-sub")
@click.option("--format", "output_format", type=FORMATS, help="Report format")
@click.option("--output", "-o", type=REPORT_FILE, help="Report file (stdout by default)")
@click.option("--seed", type=int, help="Seed for every sampled check")
@click.option("--truncation", type=int, help="Derivative truncation order")
@click.option(
    "--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False)
)
@click.pass_context
def cli(ctx, output_format, output, seed, truncation, log_level):
    """Moving-frame engine for structure-preserving submersions."""
    if log_level:
        setup_logging(log_level)
    ctx.ensure_object(dict)
    ctx.obj.update({
        "output_format": output_format,
        "output": output,
        "seed": seed,
        "truncation": truncation,
    })


# Include verbs
cli.add_command(geometry.identities)
cli.add_command(geometry.dof)
cli.add_command(geometry.schema)
cli.add_command(scenarios.dictionary)
cli.add_command(scenarios.theorem)
cli.add_command(scenarios.killing)
cli.add_command(scenarios.shear_free)
cli.add_command(numerics.pde2d)
cli.add_command(numerics.oracle)
cli.add_command(numerics.fixture)
cli.add_command(certificates.check_certificate)
cli.add_command(report.report)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI and return its exit code.

    Usage errors map to 1 (click itself would use 2, which is reserved for
    mathematical failures).
    """
    try:
        code = cli.main(args=argv, prog_name="cartan-sub", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
