"""Relations of a codimension-1 Weyl submersion whose total scale curvature vanishes."""
import logging
from typing import Optional
import sympy
from cartan_sub.core.errors import InvalidParametersError
from cartan_sub.forms.algebra import FormExpr
from cartan_sub.forms.exterior import exterior_d
from cartan_sub.geometries.builtins import HALF, weyl_submersion_codim1
from cartan_sub.geometries.system import GeometrySystem
from cartan_sub.identities.derive import form_relations
from cartan_sub.identities.relations import Relation, RelationSet

logger = logging.getLogger(__name__)

EXPANSION_ZERO = "E0=0"
EXPANSION_NONZERO = "E0!=0"


def total_scale_form(geom: GeometrySystem) -> FormExpr:
    """tau = varpi + E0 omega_0 on the reduced space."""
    time = geom.vocabulary.classes["0"].maximum
    return FormExpr.generator(geom.scale) + geom.frame_form(time) * geom.inv("E0")


def declare_time_scaling(geom: GeometrySystem) -> sympy.Expr:
    """Declare lambda_0, the scaling rate of the flow vector, and return it."""
    if not geom.vocabulary.has("lambda0"):
        geom.vocabulary.declare_head("lambda0", [], weight=1, description="time scaling rate")
    return geom.inv("lambda0")


def weyl_flatness_relations(
    p: int,
    branch: Optional[str] = None,
    truncation: Optional[int] = None
) -> RelationSet:
    """
    Consequences of F = 0 (d tau = 0) for a codimension-1 Weyl submersion.

    Args:
        p: Base dimension
        branch: None (general), "E0=0" or "E0!=0"
        truncation: Derivative truncation order

    Returns:
        RelationSet with G = 2 E0 M, E0;i = -E0 K_i, the lambda_0 scaling
        relations and the antisymmetrized acceleration relation
    """
    if branch not in (None, EXPANSION_ZERO, EXPANSION_NONZERO):
        logger.error(f"Unknown expansion branch '{branch}'")
        raise InvalidParametersError("WeylSubmersionCodim1", f"unknown branch '{branch}'")
    geom = weyl_submersion_codim1(p, truncation)
    lam = declare_time_scaling(geom)
    t = geom.vocabulary.classes["0"].maximum
    base = geom.vocabulary.classes["i"].values()

    exprs = [
        (rel.expr, "scale flatness")
        for rel in form_relations(exterior_d(total_scale_form(geom), geom), geom, "scale flatness")
    ]
    for i in base:
        for j in base:
            if i < j:
                m = geom.inv("M", i, j)
                exprs.append((geom.inv("M", i, j, derivs=(t,)) + lam * m, "time scaling"))
                antisym = HALF * (geom.inv("K", i, derivs=(j,)) - geom.inv("K", j, derivs=(i,)))
                exprs.append((antisym - (lam - geom.inv("E0")) * m, "acceleration curl"))
    exprs.append((geom.inv("E0", derivs=(t,)) - geom.inv("E0") * lam, "time scaling"))

    if branch == EXPANSION_ZERO:
        zero = {
            s: 0 for expr, _ in exprs for s in expr.free_symbols
            if geom.vocabulary.parse(s) is not None and geom.vocabulary.parse(s).head == "E0"
        }
        exprs = [(sympy.expand(expr.subs(zero)), label) for expr, label in exprs]

    name = f"{geom.label} scale-flat" + (f" [{branch}]" if branch else "")
    relation_set = RelationSet(geom.vocabulary, name, geom)
    relation_set.order = 1
    for expr, label in exprs:
        relation_set.add(Relation.from_expr(expr, geom.vocabulary, label))
    logger.info(f"{name}: {len(relation_set)} relations")
    return relation_set
