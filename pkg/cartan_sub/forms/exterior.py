"""Exterior derivative, Lie derivative and derivations driven by a geometry's rules."""
import logging
from typing import Any, Dict, Optional
import sympy
from sympy import Expr
from cartan_sub.forms.algebra import (
    CoframeGenerator,
    FormExpr,
    VectorField,
    interior,
    wedge,
)

logger = logging.getLogger(__name__)


def d_invariant(sym: sympy.Symbol, geom: Any) -> FormExpr:
    """Tensorial expansion of d of one invariant symbol.

    dI = I;mu e_mu - sum over slots of rho[x, y] I[slot <- y] + weight I scale,
    where rho is the connection of the slot's index class. Classes without a
    connection contribute nothing.
    """
    cache = geom.d_cache
    cached = cache.get(sym)
    if cached is not None:
        return cached
    vocabulary = geom.vocabulary
    term = vocabulary.parse(sym)
    if term is None:
        raise ValueError(f"'{sym}' is not an invariant of {geom.name}")
    form = FormExpr()
    for value, gen in geom.frame.items():
        form = form + FormExpr.generator(gen, vocabulary.derivative(sym, value))
    slots = list(term.symbol.slots) + [vocabulary.deriv_class_of(d) for d in term.derivs]
    values = list(term.indices) + list(term.derivs)
    n_indices = len(term.indices)
    for position, (cls, x) in enumerate(zip(slots, values)):
        family = geom.connections.get(cls.name)
        if family is None or not isinstance(x, int):
            continue
        for y in cls.values():
            if y == x:
                continue
            moved = list(values)
            moved[position] = y
            target = vocabulary.expr(term.head, moved[:n_indices], moved[n_indices:])
            if target == 0:
                continue
            form = form - geom.connection(cls.name, x, y) * target
    if geom.scale is not None and term.weight != 0:
        form = form + FormExpr.generator(geom.scale, term.weight * sym)
    cache[sym] = form
    return form


def d_function(value: Expr, geom: Any) -> FormExpr:
    """d of a zero-form coefficient by the chain rule over its symbols.

    Symbols outside the vocabulary are constants unless the geometry carries
    a rule for them.
    """
    value = sympy.sympify(value)
    result = FormExpr()
    for sym in value.free_symbols:
        if geom.vocabulary.is_invariant(sym):
            differential = d_invariant(sym, geom)
        elif sym in geom.scalar_rules:
            differential = geom.scalar_rules[sym]
        else:
            continue
        partial = sympy.diff(value, sym)
        if partial != 0:
            result = result + differential * partial
    return result


def exterior_d(expr: FormExpr, geom: Any) -> FormExpr:
    """Exterior derivative with the Leibniz rule over wedge monomials."""
    result = FormExpr()
    for wedge_term, coeff in expr.items():
        basis = FormExpr({wedge_term: sympy.Integer(1)})
        result = result + wedge(d_function(coeff, geom), basis)
        for r, gen in enumerate(wedge_term):
            before = FormExpr({wedge_term[:r]: sympy.Integer(1)})
            after = FormExpr({wedge_term[r + 1:]: sympy.Integer(1)})
            sign = -1 if r % 2 else 1
            result = result + wedge(wedge(before, geom.d_rule(gen)), after) * (sign * coeff)
    return result


def lie_derivative(vector: VectorField, expr: FormExpr, geom: Any) -> FormExpr:
    """Cartan's formula L_V = V _| d + d (V _| .)."""
    first = interior(vector, exterior_d(expr, geom))
    if expr.grade == 0:
        return first
    return first + exterior_d(interior(vector, expr), geom)


def lie_derivative_function(vector: VectorField, value: Expr, geom: Any) -> Expr:
    """V applied to a zero-form."""
    contracted = interior(vector, d_function(value, geom))
    return contracted.coefficient()


def apply_derivation(
    expr: FormExpr,
    generator_images: Dict[CoframeGenerator, FormExpr],
    symbol_images: Dict[sympy.Symbol, Expr],
    default_zero: bool = True
) -> FormExpr:
    """Apply a degree-0 derivation given on generators and on symbols.

    Generators and symbols without an image map to zero, which is how the
    known-invariant hypotheses of a Lie-derivative chain enter.
    """
    result = FormExpr()
    for wedge_term, coeff in expr.items():
        d_coeff = sympy.Integer(0)
        for sym in coeff.free_symbols:
            image = symbol_images.get(sym)
            if image is None:
                if not default_zero:
                    raise KeyError(f"No derivation image for {sym}")
                continue
            d_coeff += sympy.diff(coeff, sym) * image
        if d_coeff != 0:
            result = result + FormExpr({wedge_term: d_coeff})
        for r, gen in enumerate(wedge_term):
            image = generator_images.get(gen)
            if image is None or image.is_zero():
                continue
            before = FormExpr({wedge_term[:r]: sympy.Integer(1)})
            after = FormExpr({wedge_term[r + 1:]: sympy.Integer(1)})
            result = result + wedge(wedge(before, image), after) * coeff
    return result


def d_squared(gen: CoframeGenerator, geom: Any) -> FormExpr:
    """d of the structure equation of one generator."""
    return exterior_d(geom.d_rule(gen), geom)


def structure_check(geom: Any, reducer: Optional[Any] = None) -> Dict[CoframeGenerator, FormExpr]:
    """d^2 of every generator, reduced coefficientwise when a reducer is given."""
    residuals: Dict[CoframeGenerator, FormExpr] = {}
    for gen in geom.coframe:
        form = d_squared(gen, geom)
        if reducer is not None:
            form = form.map_coefficients(reducer.normal_form)
        residuals[gen] = form
    return residuals
