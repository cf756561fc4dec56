"""GeometrySystem: coframe, structural rules, vocabulary and defining relations."""
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple
import sympy
from sympy import Expr
from cartan_sub.core.errors import MissingDRuleError, UndeclaredInvariantError
from cartan_sub.forms.algebra import Coframe, CoframeGenerator, FormExpr
from cartan_sub.invariants.symbols import Vocabulary

logger = logging.getLogger(__name__)


class GeometrySystem:
    """Executable structural equations of one geometry at concrete dimensions.

    Attributes:
        name: Geometry name (e.g. "RiemannianSubmersion")
        params: Dimension parameters (p, q or n)
        coframe: Ordered generators
        vocabulary: Declared invariants
        frame: Derivative index value -> horizontal generator it pairs with
        connections: Index class name -> family of the antisymmetric connection
        scale: Scale connection generator (Weyl geometries)
        check_vertical: Whether vertical parts of d^2 must cancel exactly
    """

    def __init__(
        self,
        name: str,
        params: Dict[str, int],
        coframe: Coframe,
        vocabulary: Vocabulary,
        frame: Dict[int, CoframeGenerator],
        connections: Optional[Dict[str, str]] = None,
        scale: Optional[CoframeGenerator] = None,
        check_vertical: bool = True,
        description: str = ""
    ):
        self.name = name
        self.params = dict(params)
        self.coframe = coframe
        self.vocabulary = vocabulary
        self.frame = dict(sorted(frame.items()))
        self.connections = dict(connections or {})
        self.scale = scale
        self.check_vertical = check_vertical
        self.description = description
        self.d_rules: Dict[CoframeGenerator, FormExpr] = {}
        self.relations: List[Tuple[Expr, str]] = []
        self.scalar_rules: Dict[sympy.Symbol, FormExpr] = {}
        self.dependent_forms: Dict[Tuple[str, int, int], FormExpr] = {}
        self.d_cache: Dict[sympy.Symbol, FormExpr] = {}

    @property
    def label(self) -> str:
        dims = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.name}({dims})"

    @property
    def horizontal(self) -> List[CoframeGenerator]:
        return [g for g in self.coframe if g.is_horizontal]

    @property
    def dimension(self) -> int:
        """Dimension of the base of the bundle (number of horizontal generators)."""
        return len(self.horizontal)

    def set_rule(self, gen: CoframeGenerator, form: FormExpr) -> None:
        if not form.is_zero() and form.grade != 2:
            raise ValueError(f"d({gen.name}) must be a 2-form, got grade {form.grade}")
        self.d_rules[gen] = form
        self.d_cache.clear()

    def d_rule(self, gen: CoframeGenerator) -> FormExpr:
        try:
            return self.d_rules[gen]
        except KeyError:
            raise MissingDRuleError(gen.name, self.name)

    def add_relation(self, expr: Expr, provenance: str = "defining") -> None:
        """Record a defining relation (expr = 0)."""
        expr = sympy.expand(expr)
        if expr != 0:
            self.relations.append((expr, provenance))

    def declare_scalar(self, sym: sympy.Symbol, differential: FormExpr) -> None:
        """Additional scalar function with a known differential.

        Needed when an invariant does not appear in any structural equation.
        """
        self.scalar_rules[sym] = differential
        self.d_cache.clear()

    def inv(self, head: str, *indices: int, derivs: Sequence[int] = ()) -> Expr:
        """Canonical signed invariant expression."""
        return self.vocabulary.expr(head, indices, derivs)

    def form(self, family: str, *indices: int) -> FormExpr:
        return self.coframe.form(family, *indices)

    def set_dependent(self, family: str, x: int, y: int, form: FormExpr) -> None:
        """Antisymmetric component that is not a generator, e.g. omega[i,a]."""
        if x > y:
            x, y, form = y, x, -form
        self.dependent_forms[(family, x, y)] = form
        self.d_cache.clear()

    def connection(self, cls: str, x: int, y: int) -> FormExpr:
        """Signed connection form rho[x, y] of an index class."""
        family = self.connections[cls]
        if x == y:
            return FormExpr()
        low, high = min(x, y), max(x, y)
        if self.coframe.has(family, low, high):
            return self.coframe.antisymmetric(family, x, y)
        form = self.dependent_forms.get((family, low, high))
        if form is None:
            raise KeyError(f"No connection component {family}[{low},{high}] in {self.name}")
        return form if x < y else -form

    def frame_form(self, value: int) -> FormExpr:
        return FormExpr.generator(self.frame[value])

    def validate(self) -> None:
        """Every generator has a rule and every coefficient symbol is declared."""
        for gen in self.coframe:
            rule = self.d_rule(gen)
            for _, coeff in rule.items():
                for sym in coeff.free_symbols:
                    if sym in self.scalar_rules:
                        continue
                    if not self.vocabulary.is_invariant(sym):
                        raise UndeclaredInvariantError(str(sym))
        logger.debug(
            f"{self.label}: {len(self.coframe)} generators, "
            f"{len(self.vocabulary.heads)} invariant heads, "
            f"{len(self.relations)} defining relations"
        )

    def defining_relations(self):
        """Defining relations as a RelationSet."""
        from cartan_sub.identities.relations import Relation, RelationSet

        relation_set = RelationSet(self.vocabulary, name=f"{self.label} defining")
        for expr, provenance in self.relations:
            relation_set.add(Relation.from_expr(expr, self.vocabulary, provenance))
        return relation_set

    def summary(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "params": self.params,
            "generators": [
                {"name": g.name, "kind": g.kind} for g in self.coframe
            ],
            "invariants": [
                {
                    "head": s.head,
                    "slots": [c.name for c in s.slots],
                    "weight": s.weight,
                }
                for s in self.vocabulary.symbols
            ],
            "d_rules": {g.name: str(self.d_rules[g]) for g in self.coframe if g in self.d_rules},
            "relations": [str(r) for r, _ in self.relations],
        }

    def __repr__(self) -> str:
        return f"GeometrySystem({self.label})"
