"""Relations from d^2 = 0 on generators and invariants, closed under derivatives."""
import logging
from typing import Dict, List, Optional, Tuple
import sympy
from sympy import Expr
from cartan_sub.core.errors import InvalidParametersError, StructureEquationError
from cartan_sub.forms.algebra import FormExpr, horizontal_part, vertical_part
from cartan_sub.forms.exterior import d_function, d_invariant, d_squared, exterior_d
from cartan_sub.geometries.system import GeometrySystem
from cartan_sub.identities.relations import Relation, RelationSet

logger = logging.getLogger(__name__)


def form_relations(form: FormExpr, geom: GeometrySystem, provenance: str) -> List[Relation]:
    """Vanishing of each horizontal coefficient of a form, in wedge order."""
    relations = []
    items = sorted(horizontal_part(form).items(), key=lambda kv: [g.position for g in kv[0]])
    for _, coeff in items:
        relation = Relation.from_expr(coeff, geom.vocabulary, provenance)
        if relation is not None:
            relations.append(relation)
    return relations


def generator_relations(geom: GeometrySystem) -> List[Relation]:
    """Bianchi-type relations from d^2 of every generator."""
    relations = []
    for gen in geom.coframe:
        relations.extend(form_relations(d_squared(gen, geom), geom, f"d2 {gen.name}"))
    return relations


def generic_relations(geom: GeometrySystem, order: int) -> List[Relation]:
    """Commutation rules of covariant derivatives from d^2 I = 0.

    Instances whose second derivatives exceed the order are skipped.
    """
    relations = []
    if order < 2:
        return relations
    vocabulary = geom.vocabulary
    for head in vocabulary.heads:
        for sym in vocabulary.instances(head):
            ddi = exterior_d(d_invariant(sym, geom), geom)
            relations.extend(form_relations(ddi, geom, f"d2 {sym.name}"))
    return relations


def derived_relations(
    relations: List[Relation],
    geom: GeometrySystem,
    order: int
) -> List[Relation]:
    """Covariant derivatives of relations below the order (the Leibniz rule)."""
    derived = []
    for relation in relations:
        if relation.order >= order:
            continue
        differential = d_function(relation.expr, geom)
        label = f"d({relation.provenance})"
        for gen in geom.frame.values():
            coeff = differential.coefficient(gen)
            rel = Relation.from_expr(coeff, geom.vocabulary, label)
            if rel is not None:
                derived.append(rel)
    return derived


def close_relations(relation_set: RelationSet, geom: GeometrySystem, order: int) -> RelationSet:
    """Add derivatives of every relation until truncation is reached."""
    frontier = list(relation_set.relations)
    rounds = 0
    while frontier:
        rounds += 1
        new = [r for r in derived_relations(frontier, geom, order) if relation_set.add(r)]
        frontier = new
    relation_set.closed = True
    logger.debug(
        f"{relation_set.name}: closed after {rounds} rounds, {len(relation_set)} relations"
    )
    return relation_set


def derive_identities(geom: GeometrySystem, order: Optional[int] = None) -> RelationSet:
    """
    Derive every algebraic relation of a geometry up to a derivative order.

    Args:
        geom: Geometry at concrete dimensions
        order: Maximal derivative order (the vocabulary truncation by default)

    Returns:
        RelationSet with defining, Bianchi, generic and derived relations;
        incompatible lists any 1 = 0 found
    """
    truncation = geom.vocabulary.truncation
    order = truncation if order is None else order
    if order > truncation:
        raise InvalidParametersError(geom.name, f"order {order} exceeds truncation {truncation}")
    logger.info(f"Deriving identities of {geom.label} to order {order}")

    relation_set = RelationSet(geom.vocabulary, f"{geom.label} derived", geom)
    relation_set.order = order
    relation_set.extend(geom.defining_relations())
    relation_set.extend(r for r in generator_relations(geom) if r.order <= order)
    relation_set.extend(r for r in generic_relations(geom, order) if r.order <= order)
    close_relations(relation_set, geom, order)

    if geom.check_vertical:
        _check_vertical(geom, relation_set)
    reducer = relation_set.reducer()
    if reducer.incompatible is not None:
        relation_set.incompatible.append(Relation(sympy.Integer(1), 0, "reduction"))
        logger.warning(f"{geom.label}: relations reduce to 1 = 0, no integral variety")
    logger.info(f"{geom.label}: {len(relation_set)} relations ({_counts(relation_set)})")
    return relation_set


def _counts(relation_set: RelationSet) -> str:
    return ", ".join(f"order {k}: {len(v)}" for k, v in relation_set.by_order().items())


def _check_vertical(geom: GeometrySystem, relation_set: RelationSet) -> None:
    """Vertical parts of d^2 must vanish modulo the relations."""
    reducer = relation_set.reducer()
    for gen in geom.coframe:
        residual = vertical_part(d_squared(gen, geom)).map_coefficients(reducer.normal_form)
        if not residual.is_zero():
            logger.error(f"Vertical part of d^2({gen.name}) in {geom.label} does not cancel")
            raise StructureEquationError(gen.name, str(residual))


def verify_d_squared(
    geom: GeometrySystem,
    relations: Optional[RelationSet] = None
) -> Dict[str, FormExpr]:
    """
    Residual of d^2 on every generator after reduction.

    Args:
        geom: Geometry at concrete dimensions
        relations: Relation set to reduce with (derived when omitted)

    Returns:
        Generator name -> nonzero residual; empty when d^2 = 0 holds
    """
    relations = relations if relations is not None else derive_identities(geom)
    reducer = relations.reducer()
    residuals: Dict[str, FormExpr] = {}
    for gen in geom.coframe:
        form = d_squared(gen, geom)
        if not geom.check_vertical:
            form = horizontal_part(form)
        form = form.map_coefficients(reducer.normal_form)
        if not form.is_zero():
            residuals[gen.name] = form
    if residuals:
        logger.warning(f"d^2 fails on {sorted(residuals)} in {geom.label}")
    return residuals


def coefficient_table(form: FormExpr) -> List[Tuple[str, Expr]]:
    """Wedge monomial name -> coefficient, in declaration order."""
    items = sorted(form.items(), key=lambda kv: [g.position for g in kv[0]])
    return [("^".join(g.name for g in wedge) or "1", coeff) for wedge, coeff in items]
