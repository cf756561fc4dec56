"""Geometry definition files: schema, loading and comparison with built-ins."""
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import sympy
from pydantic import ValidationError
from cartan_sub.config import settings
from cartan_sub.core.errors import GeometryDefinitionError, NonReductiveGeometryError
from cartan_sub.forms.algebra import Coframe, FormExpr
from cartan_sub.geometries.builtins import builtin, resolve_name
from cartan_sub.geometries.system import GeometrySystem
from cartan_sub.invariants.symbols import (
    ANTISYM_PAIR,
    NO_SYMMETRY,
    PAIR_ANTISYM,
    RIEMANN,
    SYM_PAIR,
    IndexClass,
    Vocabulary,
)
from cartan_sub.models.requests import GeometryDefinition, TermSpec

logger = logging.getLogger(__name__)

SYMMETRIES = {
    "none": NO_SYMMETRY,
    "antisym_pair": ANTISYM_PAIR,
    "sym_pair": SYM_PAIR,
    "riemann": RIEMANN,
    "pair_antisym": PAIR_ANTISYM,
}


def definition_schema() -> Dict[str, Any]:
    """JSON schema of geometry definition files."""
    return GeometryDefinition.model_json_schema()


def load_definition(path: Union[str, Path]) -> GeometryDefinition:
    """Parse and validate a definition file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"Cannot read geometry definition {path}: {e}")
        raise GeometryDefinitionError(str(path), str(e))
    try:
        return GeometryDefinition.model_validate_json(text)
    except ValidationError as e:
        logger.error(f"Geometry definition {path} failed validation")
        raise GeometryDefinitionError(str(path), e.errors()[0]["msg"] if e.errors() else str(e))


class _Builder:
    """Turns term lists into coefficients and forms of one geometry."""

    def __init__(self, definition: GeometryDefinition, source: str):
        self.definition = definition
        self.source = source
        self.scalars = {s.name: sympy.Symbol(s.name) for s in definition.scalars}

    def fail(self, message: str) -> GeometryDefinitionError:
        logger.error(f"{self.source}: {message}")
        return GeometryDefinitionError(self.source, message)

    def factor(self, vocabulary: Vocabulary, name: str) -> sympy.Expr:
        if name in self.scalars:
            return self.scalars[name]
        term = vocabulary.parse(sympy.Symbol(name))
        if term is None:
            raise self.fail(f"factor '{name}' is not a declared invariant or scalar")
        return vocabulary.expr(term.head, term.indices, term.derivs)

    def coefficient(self, vocabulary: Vocabulary, term: TermSpec) -> sympy.Expr:
        try:
            value = sympy.Rational(term.coefficient)
        except (TypeError, ValueError):
            raise self.fail(f"coefficient '{term.coefficient}' is not rational")
        for name in term.factors:
            value = value * self.factor(vocabulary, name)
        return value

    def form(self, geom: GeometrySystem, terms: List[TermSpec]) -> FormExpr:
        result = FormExpr()
        for term in terms:
            try:
                gens = [geom.coframe.by_name(name) for name in term.wedge]
            except KeyError as e:
                raise self.fail(str(e))
            result = result + FormExpr.from_terms([(self.coefficient(geom.vocabulary, term), gens)])
        return result


def build_geometry(definition: GeometryDefinition, source: str = "<definition>") -> GeometrySystem:
    """
    Construct a GeometrySystem from a validated definition.

    Args:
        definition: Parsed definition
        source: File name for error messages

    Returns:
        Validated GeometrySystem

    Raises:
        NonReductiveGeometryError: definition declares reductive: false
        GeometryDefinitionError: inconsistent references inside the definition
    """
    if not definition.reductive:
        logger.error(f"{source}: {definition.name} is not reductive")
        raise NonReductiveGeometryError(
            definition.name,
            "the isotropy does not split off a reductive complement, "
            "so covariant derivatives are undefined"
        )
    builder = _Builder(definition, source)
    classes = [IndexClass(c.name, c.extent, c.offset) for c in definition.index_classes]
    names = {c.name for c in classes}
    for cls in definition.deriv_classes or []:
        if cls not in names:
            raise builder.fail(f"derivative class '{cls}' is not declared")
    truncation = definition.truncation or settings.truncation_order
    vocabulary = Vocabulary(classes, definition.deriv_classes, truncation)
    for inv in definition.invariants:
        missing = [s for s in inv.slots if s not in names]
        if missing:
            raise builder.fail(f"invariant '{inv.head}' uses undeclared classes {missing}")
        try:
            vocabulary.declare_head(
                inv.head, inv.slots, SYMMETRIES[inv.symmetry], inv.weight, inv.description
            )
        except ValueError as e:
            raise builder.fail(str(e))

    coframe = Coframe()
    for gen in definition.generators:
        try:
            coframe.add(gen.family, tuple(gen.indices), gen.kind)
        except ValueError as e:
            raise builder.fail(str(e))
    try:
        frame = {int(value): coframe.by_name(name) for value, name in definition.frame.items()}
        scale = coframe.by_name(definition.scale) if definition.scale else None
    except (KeyError, ValueError) as e:
        raise builder.fail(f"frame or scale refers to an unknown generator: {e}")

    geom = GeometrySystem(
        definition.name,
        definition.params,
        coframe,
        vocabulary,
        frame,
        definition.connections,
        scale=scale,
        check_vertical=definition.check_vertical,
        description=definition.description,
    )
    for spec in definition.scalars:
        geom.declare_scalar(builder.scalars[spec.name], builder.form(geom, spec.differential))
    for name, terms in definition.d_rules.items():
        try:
            gen = coframe.by_name(name)
        except KeyError:
            raise builder.fail(f"d-rule for unknown generator '{name}'")
        try:
            geom.set_rule(gen, builder.form(geom, terms))
        except ValueError as e:
            raise builder.fail(str(e))
    for terms in definition.relations:
        value = sum((builder.coefficient(vocabulary, t) for t in terms), sympy.Integer(0))
        geom.add_relation(value, f"file {source}")
    geom.validate()
    logger.info(f"Loaded {geom.label} from {source}")
    return geom


def load_geometry(path: Union[str, Path]) -> GeometrySystem:
    """Load, build and (when the file names one) validate against a built-in."""
    definition = load_definition(path)
    geom = build_geometry(definition, str(path))
    if definition.builtin:
        differences = validate_against_builtin(geom, definition.builtin)
        if differences:
            logger.error(f"{path} differs from {definition.builtin}: {differences[0]}")
            raise GeometryDefinitionError(str(path), "; ".join(differences))
    return geom


def validate_against_builtin(geom: GeometrySystem, name: Optional[str] = None) -> List[str]:
    """
    Differences between a geometry and the built-in of the same name and dimensions.

    Args:
        geom: Geometry to check
        name: Built-in name (the geometry's own name by default)

    Returns:
        Human-readable differences; empty when the systems agree
    """
    reference = builtin(resolve_name(name or geom.name), geom.params, geom.vocabulary.truncation)
    differences = []
    ours = [(g.name, g.kind) for g in geom.coframe]
    theirs = [(g.name, g.kind) for g in reference.coframe]
    if ours != theirs:
        differences.append(f"generators {ours} != {theirs}")
    for sym in reference.vocabulary.symbols:
        if not geom.vocabulary.has(sym.head):
            differences.append(f"invariant {sym.head} not declared")
            continue
        mine = geom.vocabulary.symbol(sym.head)
        if [c.name for c in mine.slots] != [c.name for c in sym.slots] or mine.weight != sym.weight:
            differences.append(f"invariant {sym.head} has different slots or weight")
    frame_names = lambda system: {v: g.name for v, g in system.frame.items()}
    if frame_names(geom) != frame_names(reference):
        differences.append("frame pairing differs")
    if differences:
        return differences
    for gen in reference.coframe:
        mine = geom.d_rules.get(gen)
        if mine is None:
            differences.append(f"no d-rule for {gen.name}")
        elif not (mine - reference.d_rule(gen)).is_zero():
            differences.append(f"d({gen.name}) differs: {mine} != {reference.d_rule(gen)}")
    return differences


def geometry_from_config(
    geometry: str,
    params: Dict[str, int],
    truncation: Optional[int] = None
) -> GeometrySystem:
    """Built-in by name, or a definition file when the argument is a path."""
    if geometry.endswith(".json") or Path(geometry).is_file():
        return load_geometry(geometry)
    return builtin(geometry, params, truncation)
