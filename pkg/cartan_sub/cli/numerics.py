"""Numeric oracle verbs."""
import click
from cartan_sub.cli.common import REPORT_FILE, build_config, execute


@click.command("pde2d")
@click.option(
    "--input", "path", required=True, type=click.Path(exists=True, dir_okay=False),
    help="Problem file"
)
@click.option("--csv", "csv_path", type=REPORT_FILE, help="Also write the grid as x,y,t rows")
@click.pass_context
def pde2d(ctx, path, csv_path):
    """Solve sin t t_y + cos t t_x = a + b by characteristics."""
    execute(ctx, build_config(ctx, "pde2d", {"input": path, "csv": csv_path}))


@click.group("oracle")
def oracle():
    """Numeric search oracles."""


@oracle.command("antisym")
@click.option("--p", type=int, required=True, help="Matrix size")
@click.option("--trials", type=int, help="Random restarts (settings default)")
@click.pass_context
def antisym(ctx, p, trials):
    """Search for nonzero antisymmetric M with rotation-invariant equal row norms."""
    execute(ctx, build_config(ctx, "oracle-antisym", {"trials": trials}, p=p))


@click.group("fixture")
def fixture():
    """Closed-form test fixtures."""


@fixture.command("rotating")
@click.option("--omega", type=float, required=True, help="Angular rate")
@click.option("--radius", "radii", type=float, multiple=True, help="Sample radius (repeatable)")
@click.option("--step", type=float, help="Finite-difference step")
@click.pass_context
def rotating(ctx, omega, radii, step):
    """Sample the invariants of a rigidly rotating flow in flat space."""
    options = {"omega": omega, "radii": list(radii), "step": step}
    execute(ctx, build_config(ctx, "fixture-rotating", options))
