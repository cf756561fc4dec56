"""Derivatives along the fibre (flow) direction and their linearization."""
import logging
from typing import Dict, Iterable, List, Sequence
import sympy
from sympy import Expr
from cartan_sub.geometries.system import GeometrySystem
from cartan_sub.invariants.symbols import IndexClass, Vocabulary, RIEMANN
from cartan_sub.scenarios.certificate import rational_sample

logger = logging.getLogger(__name__)


def time_index(geom: GeometrySystem) -> int:
    return geom.vocabulary.classes["0"].maximum


def fibre_derivative(expr: Expr, geom: GeometrySystem, frozen: Iterable[str] = ()) -> Expr:
    """
    Derivative along the flow index, chain rule over the invariant symbols.

    Args:
        expr: Polynomial in invariants; other symbols are constants
        geom: Flow geometry (index class "0")
        frozen: Heads known to be independent of the fibre coordinates

    Returns:
        Expanded derivative
    """
    frozen = set(frozen)
    vocabulary = geom.vocabulary
    t = time_index(geom)
    result = sympy.Integer(0)
    for sym in vocabulary.invariant_symbols(expr):
        if vocabulary.parse(sym).head in frozen:
            continue
        result += sympy.diff(expr, sym) * vocabulary.derivative(sym, t)
    return sympy.expand(result)


def is_primed(sym: sympy.Symbol, geom: GeometrySystem) -> bool:
    """Whether the last derivative index of a symbol is the flow index."""
    term = geom.vocabulary.parse(sym)
    return term is not None and bool(term.derivs) and term.derivs[-1] == time_index(geom)


def primed_symbols(exprs: Iterable[Expr], geom: GeometrySystem) -> List[sympy.Symbol]:
    found = {s for e in exprs for s in e.free_symbols if is_primed(s, geom)}
    return sorted(found, key=lambda s: s.name)


def sample_coefficients(
    exprs: Sequence[Expr],
    unknowns: Sequence[sympy.Symbol],
    seed: int,
    fixed: Dict[sympy.Symbol, Expr] = None
) -> List[Expr]:
    """Replace every symbol except the unknowns by a rational sample value."""
    unknown_set = set(unknowns)
    others = sorted(
        {s for e in exprs for s in e.free_symbols if s not in unknown_set},
        key=lambda s: s.name
    )
    point = rational_sample(others, seed)
    point.update(fixed or {})
    logger.debug(f"Sampling {len(others)} coefficient symbols, {len(unknowns)} unknowns")
    return [sympy.expand(e.xreplace(point)) for e in exprs]


def total_curvature_vocabulary(n: int) -> Vocabulary:
    """Constant total-space curvature symbols R[mu,nu,rho,lambda]."""
    vocabulary = Vocabulary([IndexClass("m", n, 0)], ["m"], 0)
    vocabulary.declare_head("R", ["m"] * 4, RIEMANN, description="total-space curvature")
    return vocabulary
