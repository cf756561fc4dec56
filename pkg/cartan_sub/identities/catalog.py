"""Catalogued identities of the built-in geometries.

Each catalog lists the named Bianchi-type identities, the defining relations
of the geometry and the commutation rule of covariant derivatives; it is
closed under differentiation the same way derived sets are.
"""
import logging
from itertools import product
from typing import Callable, Dict, Iterator, List, Optional, Tuple
import sympy
from sympy import Expr
from cartan_sub.core.errors import InvalidParametersError
from cartan_sub.forms.algebra import FormExpr, horizontal_part
from cartan_sub.geometries.builtins import base_fibre_curvature, mixed_fibre_curvature
from cartan_sub.geometries.system import GeometrySystem
from cartan_sub.identities.derive import close_relations
from cartan_sub.identities.relations import Relation, RelationSet

logger = logging.getLogger(__name__)

HALF = sympy.Rational(1, 2)

Entry = Tuple[Expr, str]


def covariant(geom: GeometrySystem, expr: Expr, index: int) -> Expr:
    """Covariant derivative of an invariant polynomial along one frame index."""
    vocabulary = geom.vocabulary
    result = sympy.Integer(0)
    for sym in vocabulary.invariant_symbols(expr):
        result += sympy.diff(expr, sym) * vocabulary.derivative(sym, index)
    return sympy.expand(result)


def _delta(x: int, y: int) -> int:
    return 1 if x == y else 0


def _values(geom: GeometrySystem, cls: str) -> List[int]:
    return list(geom.vocabulary.classes[cls].values())


def _time(geom: GeometrySystem) -> int:
    return geom.vocabulary.classes["0"].maximum


def first_bianchi(geom: GeometrySystem, head: str, cls: str) -> Iterator[Entry]:
    """X_ijkl + X_iklj + X_iljk = 0."""
    inv = geom.inv
    for i, j, k, l in product(_values(geom, cls), repeat=4):
        cyclic = inv(head, i, j, k, l) + inv(head, i, k, l, j) + inv(head, i, l, j, k)
        yield cyclic, f"{head} first Bianchi"


def second_bianchi(
    geom: GeometrySystem,
    head: str,
    cls: str,
    deriv_cls: Optional[str] = None
) -> Iterator[Entry]:
    """X_ij[kl;m] = 0."""
    inv = geom.inv
    values = _values(geom, cls)
    for i, j, k, l in product(values, repeat=4):
        for m in _values(geom, deriv_cls or cls):
            yield (
                inv(head, i, j, k, l, derivs=(m,))
                + inv(head, i, j, l, m, derivs=(k,))
                + inv(head, i, j, m, k, derivs=(l,)),
                f"{head} second Bianchi",
            )


def vanishing_derivative(
    geom: GeometrySystem,
    head: str,
    direction: str,
    label: str
) -> Iterator[Entry]:
    """X;d = 0 for every instance of a head and every d in a class."""
    for sym in geom.vocabulary.instances(head):
        for d in _values(geom, direction):
            yield geom.vocabulary.derivative(sym, d), label


def _riemannian_entries(geom: GeometrySystem) -> Iterator[Entry]:
    yield from first_bianchi(geom, "R", "m")
    yield from second_bianchi(geom, "R", "m")


def _weyl_entries(geom: GeometrySystem) -> Iterator[Entry]:
    inv = geom.inv
    m = _values(geom, "m")
    # R_mu[nu rho lam] balanced by the scale curvature
    for mu, nu, rho, lam in product(m, repeat=4):
        yield (
            inv("R", mu, nu, rho, lam) + inv("R", mu, rho, lam, nu) + inv("R", mu, lam, nu, rho)
            + _delta(mu, nu) * inv("F", rho, lam)
            + _delta(mu, rho) * inv("F", lam, nu)
            + _delta(mu, lam) * inv("F", nu, rho),
            "R first Bianchi with scale curvature",
        )
    yield from second_bianchi(geom, "R", "m")
    for mu, nu, rho in product(m, repeat=3):
        yield (
            inv("F", mu, nu, derivs=(rho,))
            + inv("F", nu, rho, derivs=(mu,))
            + inv("F", rho, mu, derivs=(nu,)),
            "F closed",
        )


def _riemannian_submersion_entries(geom: GeometrySystem) -> Iterator[Entry]:
    inv = geom.inv
    base = _values(geom, "i")
    fibre = _values(geom, "a")
    yield from first_bianchi(geom, "S_base", "i")
    yield from first_bianchi(geom, "S_fibre", "a")

    for i, j, k in product(base, repeat=3):
        for a in fibre:
            lhs = (
                inv("M", i, j, a, derivs=(k,))
                + inv("M", j, k, a, derivs=(i,))
                + inv("M", k, i, a, derivs=(j,))
            )
            rhs = sum(
                inv("M", i, j, b) * inv("K", k, a, b)
                + inv("M", j, k, b) * inv("K", i, a, b)
                + inv("M", k, i, b) * inv("K", j, a, b)
                for b in fibre
            )
            yield lhs - rhs, "M cyclic sum"
    for i, j in product(base, repeat=2):
        for a, b in product(fibre, repeat=2):
            yield (
                -inv("K", i, a, b, derivs=(j,)) + inv("K", j, a, b, derivs=(i,))
                - inv("M", i, j, a, derivs=(b,)) - inv("M", i, j, b, derivs=(a,)),
                "K/M coupling",
            )

    yield from second_bianchi(geom, "S_base", "i")
    yield from vanishing_derivative(geom, "S_base", "a", "S_base fibre-independent")
    yield from second_bianchi(geom, "S_fibre", "a")

    A3 = lambda a, b, c, i: mixed_fibre_curvature(geom, a, b, c, i)
    A4 = lambda a, b, i, j: base_fibre_curvature(geom, a, b, i, j)
    for a, b, c, d in product(fibre, repeat=4):
        for i in base:
            value = covariant(geom, A3(a, b, c, i), d) - covariant(geom, A3(a, b, d, i), c)
            for e in fibre:
                value += -inv("S_fibre", a, b, e, d) * inv("K", i, e, c)
                value += inv("S_fibre", a, b, e, c) * inv("K", i, e, d)
            yield inv("S_fibre", a, b, c, d, derivs=(i,)) - value, "S_fibre along the base"
    for a, b in product(fibre, repeat=2):
        for i, j, k in product(base, repeat=3):
            value = (
                covariant(geom, A4(a, b, i, j), k)
                + covariant(geom, A4(a, b, j, k), i)
                + covariant(geom, A4(a, b, k, i), j)
            )
            for c in fibre:
                value -= 2 * (
                    A3(a, b, c, k) * inv("M", i, j, c)
                    + A3(a, b, c, i) * inv("M", j, k, c)
                    + A3(a, b, c, j) * inv("M", k, i, c)
                )
            yield value, "A_ab[ij;k]"
        for c in fibre:
            for i, j in product(base, repeat=2):
                value = covariant(geom, A3(a, b, c, i), j) - covariant(geom, A3(a, b, c, j), i)
                value += covariant(geom, A4(a, b, i, j), c)
                for d in fibre:
                    value += A3(a, b, d, i) * inv("K", j, d, c) - A3(a, b, d, j) * inv("K", i, d, c)
                    value -= 2 * inv("S_fibre", a, b, d, c) * inv("M", i, j, d)
                yield value, "A_abc[i;j]"


def _flow_vorticity_entries(geom: GeometrySystem) -> Iterator[Entry]:
    """M_[ij;k] = M_[ij K_k] on a codimension-1 flow."""
    inv = geom.inv
    base = _values(geom, "i")
    for i, j, k in product(base, repeat=3):
        yield (
            inv("M", i, j, derivs=(k,)) + inv("M", j, k, derivs=(i,)) + inv("M", k, i, derivs=(j,))
            - inv("M", i, j) * inv("K", k)
            - inv("M", j, k) * inv("K", i)
            - inv("M", k, i) * inv("K", j),
            "M cyclic sum",
        )


def _born_rigid_entries(geom: GeometrySystem) -> Iterator[Entry]:
    inv = geom.inv
    base = _values(geom, "i")
    t = _time(geom)
    yield from first_bianchi(geom, "S", "i")
    for i, j in product(base, repeat=2):
        yield (
            inv("M", i, j, derivs=(t,))
            + HALF * (inv("K", i, derivs=(j,)) - inv("K", j, derivs=(i,))),
            "M_ij;0 = -K_[i;j]",
        )
    yield from _flow_vorticity_entries(geom)
    yield from second_bianchi(geom, "S", "i")
    yield from vanishing_derivative(geom, "S", "0", "S fibre-independent")


def _weyl_submersion_entries(geom: GeometrySystem) -> Iterator[Entry]:
    inv = geom.inv
    base = _values(geom, "i")
    t = _time(geom)
    for i, j in product(base, repeat=2):
        yield (
            inv("G", i, j) + inv("K", i, derivs=(j,)) - inv("K", j, derivs=(i,))
            + 2 * inv("M", i, j, derivs=(t,)),
            "G_ij = -2K_[i;j] - 2M_ij;0",
        )
    yield from _flow_vorticity_entries(geom)
    for i, j, k in product(base, repeat=3):
        yield (
            inv("G", i, j, derivs=(k,)) + inv("G", j, k, derivs=(i,)) + inv("G", k, i, derivs=(j,)),
            "G closed",
        )
    yield from vanishing_derivative(geom, "G", "0", "G fibre-independent")
    for i, j, k, l in product(base, repeat=4):
        yield (
            inv("S", i, j, k, l) + inv("S", i, k, l, j) + inv("S", i, l, j, k)
            + _delta(i, j) * inv("G", k, l)
            + _delta(i, k) * inv("G", l, j)
            + _delta(i, l) * inv("G", j, k),
            "S first Bianchi with scale curvature",
        )
    yield from second_bianchi(geom, "S", "i")
    yield from vanishing_derivative(geom, "S", "0", "S fibre-independent")


def _galilean_entries(geom: GeometrySystem) -> Iterator[Entry]:
    inv = geom.inv
    base = _values(geom, "i")
    for sym in geom.vocabulary.instances("Gamma3"):
        yield sym, "Gamma_ijk = 0"
    for i, j, k in product(base, repeat=3):
        yield inv("Gamma", i, j, derivs=(k,)) - inv("Gamma", i, k, derivs=(j,)), "Gamma_i[j;k] = 0"


CATALOGS: Dict[str, Callable[[GeometrySystem], Iterator[Entry]]] = {
    "Riemannian": _riemannian_entries,
    "Weyl": _weyl_entries,
    "RiemannianSubmersion": _riemannian_submersion_entries,
    "WeylSubmersionCodim1": _weyl_submersion_entries,
    "BornRigid": _born_rigid_entries,
    "GalileanRigid": _galilean_entries,
}


def has_catalog(name: str) -> bool:
    return name in CATALOGS


def _curvature_form(geom: GeometrySystem, cls: str, x: int, y: int) -> FormExpr:
    """Horizontal part of d rho[x, y]."""
    if x == y:
        return FormExpr()
    family = geom.connections[cls]
    low, high = min(x, y), max(x, y)
    form = horizontal_part(geom.d_rule(geom.coframe.get(family, low, high)))
    return form if x < y else -form


def commutation_relations(geom: GeometrySystem) -> List[Relation]:
    """I;mu nu e_nu ^ e_mu + I;mu T_mu - sum_slots Omega[x,y] I[y] + w I Phi = 0.

    T_mu is the torsion of the frame form e_mu, Omega the curvature of each
    slot's connection and Phi the scale curvature.
    """
    vocabulary = geom.vocabulary
    relations: List[Relation] = []
    if vocabulary.truncation < 2:
        return relations
    torsion = {value: horizontal_part(geom.d_rule(gen)) for value, gen in geom.frame.items()}
    scale = horizontal_part(geom.d_rule(geom.scale)) if geom.scale is not None else FormExpr()
    for head in vocabulary.heads:
        symbol = vocabulary.symbol(head)
        for sym in vocabulary.instances(head):
            term = vocabulary.parse(sym)
            form = FormExpr()
            for mu, e_mu in geom.frame.items():
                first = vocabulary.derivative(sym, mu)
                form = form + torsion[mu] * first
                for nu, e_nu in geom.frame.items():
                    second = covariant(geom, first, nu)
                    if second != 0:
                        form = form + FormExpr.generator(e_nu) * FormExpr.generator(e_mu) * second
            for slot, (cls, x) in enumerate(zip(symbol.slots, term.indices)):
                if cls.name not in geom.connections:
                    continue
                for y in cls.values():
                    moved = list(term.indices)
                    moved[slot] = y
                    target = vocabulary.expr(head, moved)
                    if target != 0 and y != x:
                        form = form - _curvature_form(geom, cls.name, x, y) * target
            if symbol.weight:
                form = form + scale * (symbol.weight * sym)
            for _, coeff in form.items():
                relation = Relation.from_expr(coeff, vocabulary, f"commutator {sym.name}")
                if relation is not None:
                    relations.append(relation)
    return relations


def catalog(geom: GeometrySystem, order: Optional[int] = None) -> RelationSet:
    """
    Catalogued relations of a built-in geometry at its dimensions.

    Args:
        geom: Built-in geometry
        order: Maximal derivative order (the vocabulary truncation by default)

    Returns:
        Closed RelationSet
    """
    entries = CATALOGS.get(geom.name)
    if entries is None:
        logger.error(f"No identity catalog for {geom.name}")
        raise InvalidParametersError(geom.name, "no identity catalog for this geometry")
    order = geom.vocabulary.truncation if order is None else order
    relation_set = RelationSet(geom.vocabulary, f"{geom.label} catalog", geom)
    relation_set.order = order
    relation_set.extend(geom.defining_relations())
    for expr, label in entries(geom):
        relation = Relation.from_expr(expr, geom.vocabulary, label)
        if relation is not None and relation.order <= order:
            relation_set.add(relation)
    relation_set.extend(r for r in commutation_relations(geom) if r.order <= order)
    close_relations(relation_set, geom, order)
    logger.info(f"{relation_set.name}: {len(relation_set)} relations")
    return relation_set
