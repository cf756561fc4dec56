"""
Killing and semi-Killing vector fields.

A Lie derivative commutes with d, so once L_V g = 0 is known for a
generator g, applying L_V to the structure equation of g gives linear
equations for the Lie derivatives of the other generators and invariants.
Propagating these until nothing new vanishes is a derivation chain.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional
import sympy
from sympy import Expr
from cartan_sub.core.errors import InvalidParametersError
from cartan_sub.forms.algebra import CoframeGenerator, FormExpr, VectorField
from cartan_sub.forms.exterior import apply_derivation, lie_derivative
from cartan_sub.geometries.builtins import riemannian, riemannian_split, riemannian_submersion
from cartan_sub.geometries.system import GeometrySystem
from cartan_sub.identities.relations import Relation, RelationSet
from cartan_sub.utils.linalg import eliminate, forced_zero_unknowns

logger = logging.getLogger(__name__)


@dataclass
class ChainResult:
    """Outcome of a derivation chain."""

    geometry: str
    hypothesis: List[str]
    zero_generators: List[str] = field(default_factory=list)
    zero_symbols: List[str] = field(default_factory=list)
    undetermined_generators: List[str] = field(default_factory=list)
    undetermined_symbols: List[str] = field(default_factory=list)
    rounds: int = 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "geometry": self.geometry,
            "hypothesis": self.hypothesis,
            "zero_generators": self.zero_generators,
            "zero_symbols": self.zero_symbols,
            "undetermined_generators": self.undetermined_generators,
            "undetermined_symbols": self.undetermined_symbols,
            "rounds": self.rounds,
        }


def _rule_symbols(geom: GeometrySystem) -> List[sympy.Symbol]:
    found = set()
    for gen in geom.coframe:
        for _, coeff in geom.d_rule(gen).items():
            found.update(geom.vocabulary.invariant_symbols(coeff))
    return sorted(found, key=lambda s: s.name)


def derivation_chain(
    geom: GeometrySystem,
    hypothesis: Iterable[CoframeGenerator],
    max_rounds: int = 10
) -> ChainResult:
    """
    Propagate L_V g = 0 from the hypothesis generators through d.

    Every other generator gets an image sum_h c[g|h] h with unknown
    coefficients and every invariant in the structure equations an unknown
    image. Each round applies the derivation to the structure equations of
    the generators already known to be annihilated; unknowns vanishing in
    every solution are removed, and a generator all of whose coefficients
    vanish joins the known set.

    Args:
        geom: Geometry system
        hypothesis: Generators with L_V g = 0
        max_rounds: Safety bound on propagation rounds

    Returns:
        ChainResult with the annihilated generators and invariants
    """
    known = list(dict.fromkeys(hypothesis))
    generators = list(geom.coframe)
    coefficients: Dict[CoframeGenerator, Dict[CoframeGenerator, sympy.Symbol]] = {
        g: {h: sympy.Symbol(f"L[{g.name}|{h.name}]") for h in generators}
        for g in generators if g not in known
    }
    symbol_images = {s: sympy.Symbol(f"L[{s.name}]") for s in _rule_symbols(geom)}
    zero_symbols: List[sympy.Symbol] = []
    used = set()
    rounds = 0
    logger.info(f"Derivation chain on {geom.label} from {[g.name for g in known]}")

    while rounds < max_rounds:
        rounds += 1
        images = {
            g: FormExpr.from_terms((c, (h,)) for h, c in row.items())
            for g, row in coefficients.items()
        }
        equations: List[Expr] = []
        for g in known:
            if g in used:
                continue
            form = apply_derivation(geom.d_rule(g), images, symbol_images)
            equations.extend(coeff for _, coeff in form.items())
            used.add(g)
        unknowns = sorted(
            {s for e in equations for s in e.free_symbols if s.name.startswith("L[")},
            key=lambda s: s.name
        )
        if not unknowns:
            break
        forced = set(forced_zero_unknowns(equations, unknowns))
        logger.debug(
            f"Round {rounds}: {len(equations)} equations, "
            f"{len(forced)} of {len(unknowns)} forced"
        )
        for g in list(coefficients):
            coefficients[g] = {h: c for h, c in coefficients[g].items() if c not in forced}
            if not coefficients[g]:
                del coefficients[g]
                known.append(g)
        for s, image in list(symbol_images.items()):
            if image in forced:
                zero_symbols.append(s)
                del symbol_images[s]
        if all(g in used for g in known):
            break

    hypothesis_names = [g.name for g in dict.fromkeys(hypothesis)]
    result = ChainResult(
        geometry=geom.label,
        hypothesis=hypothesis_names,
        zero_generators=[g.name for g in known if g.name not in hypothesis_names],
        zero_symbols=[s.name for s in zero_symbols],
        undetermined_generators=[g.name for g in coefficients],
        undetermined_symbols=[s.name for s in symbol_images],
        rounds=rounds,
    )
    logger.info(
        f"Derivation chain on {geom.label}: {len(result.zero_generators)} generators, "
        f"{len(result.zero_symbols)} invariants annihilated in {rounds} rounds"
    )
    return result


def killing_chain(n: int, truncation: Optional[int] = None) -> ChainResult:
    """From L_V omega_mu = 0 derive L_V omega_mu_nu = 0 and L_V R = 0."""
    geom = riemannian(n, truncation)
    return derivation_chain(geom, [g for g in geom.coframe if g.is_horizontal])


def semi_killing_chain(p: int, q: int, truncation: Optional[int] = None) -> ChainResult:
    """From L_U pi_i = 0 derive L_U pi_ij = 0 and L_U S_base = 0 on a submersion."""
    geom = riemannian_submersion(p, q, truncation)
    base = geom.vocabulary.classes["i"]
    hypothesis = [geom.frame[i] for i in base.values()]
    return derivation_chain(geom, hypothesis)


def semi_killing_lift(p: int, q: int) -> Dict[str, object]:
    """
    Lift of a fibre direction U_a to a field annihilating the base forms.

    On the unreduced space, L_U omega_i = 0 with U vertical over the base
    forces U_ij = M_ija U_a; the remaining equations hold for every U_a
    exactly when M_(ij)a = 0 and K_i[ab] = 0.

    Returns:
        {"lift": U[i,j] -> expression in U[a], "conditions": RelationSet,
         "geometry": the RiemannianSplit system}
    """
    geom = riemannian_split(p, q)
    base = geom.vocabulary.classes["i"]
    fibre = geom.vocabulary.classes["a"]
    fibre_components = {a: sympy.Symbol(f"U[{a}]") for a in fibre.values()}
    components: Dict[CoframeGenerator, Expr] = {
        geom.frame[a]: u for a, u in fibre_components.items()
    }
    lift_unknowns = []
    for gen in geom.coframe:
        if gen.is_horizontal or len(gen.indices) != 2:
            continue
        symbol = sympy.Symbol(f"U[{gen.indices[0]},{gen.indices[1]}]")
        components[gen] = symbol
        if base.contains(gen.indices[0]):
            lift_unknowns.append(symbol)
    vector = VectorField(components)

    equations: List[Expr] = []
    for i in base.values():
        form = lie_derivative(vector, FormExpr.generator(geom.frame[i]), geom)
        ordered = sorted(form.items(), key=lambda t: [g.position for g in t[0]])
        equations.extend(coeff for _, coeff in ordered)
    elimination = eliminate(equations, lift_unknowns)

    conditions = RelationSet(geom.vocabulary, f"{geom.label} semi-Killing", geom)
    for condition in elimination.conditions:
        for u in fibre_components.values():
            coeff = sympy.expand(condition).coeff(u)
            if coeff != 0:
                conditions.add(Relation.from_expr(coeff, geom.vocabulary, "semi-Killing"))
    logger.info(f"Semi-Killing lift on {geom.label}: {len(conditions)} conditions")
    return {"lift": dict(elimination.solution), "conditions": conditions, "geometry": geom}


def killing_criteria(geom: GeometrySystem, codim: int) -> List[str]:
    """
    Conditions under which a submersion direction is a Killing field.

    Args:
        geom: Submersion system (flow systems for codim 1)
        codim: Fibre dimension

    Returns:
        Condition list, in index notation
    """
    vocabulary = geom.vocabulary
    if not (vocabulary.has("M") and vocabulary.has("K")):
        logger.error(f"{geom.label} has no gluing invariants M and K")
        raise InvalidParametersError(geom.label, "killing criteria need the invariants M and K")
    if codim == 1:
        if "0" not in vocabulary.classes:
            raise InvalidParametersError(geom.label, "codimension 1 needs a flow index")
        t = vocabulary.classes["0"].maximum
        return [
            f"M[i,j;{t}] = 0",
            f"K[i;{t}] = 0",
            "d log(lambda)/dx^i = K[i]",
        ]
    if codim < 1:
        raise InvalidParametersError(geom.label, "codimension must be positive")
    heads = [h for h in vocabulary.heads if h not in ("M", "K")]
    criteria = ["L_V M[i,j,a] = 0", "L_V K[i,a,b] = 0"]
    criteria.extend(f"L_V {h} = 0" for h in heads)
    criteria.extend(["L_V K[i,a,[b;c]] = 0", "L_V M[i,j,[a;b]] = 0"])
    return criteria
