"""Geometry verbs: identities, dof and the definition-file schema."""
import click
from cartan_sub.cli.common import build_config, execute


@click.command("identities")
@click.argument("geometry")
@click.option("--p", type=int, help="Base dimension")
@click.option("--q", type=int, help="Fibre dimension")
@click.option("--n", type=int, help="Total dimension")
@click.option("--order", type=int, help="Derivative order to derive to (truncation by default)")
@click.pass_context
def identities(ctx, geometry, p, q, n, order):
    """Derive the relations of GEOMETRY and diff them against its catalog.

    GEOMETRY is a built-in name (riem-sub, born-rigid, weyl-sub, ...) or a
    definition file.
    """
    options = {"order": order} if order is not None else {}
    execute(ctx, build_config(ctx, "identities", options, geometry=geometry, p=p, q=q, n=n))


@click.command("dof")
@click.argument("geometry")
@click.option("--p", type=int, help="Base dimension")
@click.option("--q", type=int, help="Fibre dimension")
@click.option("--n", type=int, help="Total dimension")
@click.option("--constraint", help="Constraint name, several joined with '+'")
@click.pass_context
def dof(ctx, geometry, p, q, n, constraint):
    """Cartan characters of the seed table of GEOMETRY."""
    execute(ctx, build_config(ctx, "dof", geometry=geometry, p=p, q=q, n=n, constraint=constraint))


@click.command("schema")
@click.pass_context
def schema(ctx):
    """Print the JSON schema of geometry definition files."""
    execute(ctx, build_config(ctx, "schema", output_format="json"))
