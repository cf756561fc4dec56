"""Scenario verbs: curvature dictionaries, theorems and Killing fields."""
import click
from cartan_sub.cli.common import build_config, execute
from cartan_sub.scenarios import CONTRACTIONS, THEOREMS
from cartan_sub.scenarios.ellis import ASSUMPTIONS


@click.command("dictionary")
@click.option("--p", type=int, required=True, help="Base dimension")
@click.option("--q", type=int, required=True, help="Fibre dimension")
@click.option("--check", is_flag=True, help="Verify the dictionary instead of printing it")
@click.option("--contraction", type=click.Choice(CONTRACTIONS), help="Print a contraction")
@click.pass_context
def dictionary(ctx, p, q, check, contraction):
    """Total-space curvature of a Riemannian submersion in terms of its invariants."""
    options = {"check": check, "contraction": contraction}
    execute(ctx, build_config(ctx, "dictionary", options, p=p, q=q))


@click.command("theorem")
@click.argument("name", type=click.Choice(list(THEOREMS)))
@click.option("--dim", "n", type=int, required=True, help="Total dimension n")
@click.option(
    "--assume", type=click.Choice(ASSUMPTIONS), help="Extra hypothesis for the Ellis scenarios"
)
@click.option("--trials", type=int, help="Rigidity search restarts (ellis-geodesic)")
@click.pass_context
def theorem(ctx, name, n, assume, trials):
    """Verify a theorem scenario and print its certificate."""
    options = {"name": name, "assume": assume, "trials": trials}
    execute(ctx, build_config(ctx, "theorem", options, n=n))


@click.command("killing")
@click.option("--n", type=int, help="Killing chain on Riemannian(n)")
@click.option("--p", type=int, help="Semi-Killing lift: base dimension")
@click.option("--q", type=int, help="Semi-Killing lift: fibre dimension")
@click.pass_context
def killing(ctx, n, p, q):
    """Propagate a vanishing Lie derivative through the structure equations."""
    execute(ctx, build_config(ctx, "killing", n=n, p=p, q=q))


@click.command("shear-free")
@click.option("--p", type=int, required=True, help="Dimension of the space of flow lines")
@click.pass_context
def shear_free(ctx, p):
    """Check that a shear-free flow induces a Weyl structure on its flow lines."""
    execute(ctx, build_config(ctx, "shear-free", p=p))
