"""Certificate verbs."""
import click
from cartan_sub.cli.common import build_config, execute


@click.command("check-certificate")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def check_certificate(ctx, path):
    """Replay a certificate file with exact rational arithmetic."""
    execute(ctx, build_config(ctx, "check-certificate", {"path": path}))
