"""Relations among invariants and relation sets."""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Optional
import sympy
from sympy import Expr
from cartan_sub.invariants.reduction import Reducer, monomial_terms

logger = logging.getLogger(__name__)


def _order_of(expr: Expr, vocabulary: Any) -> int:
    orders = [0]
    for sym in expr.free_symbols:
        term = vocabulary.parse(sym) if vocabulary is not None else None
        if term is not None:
            orders.append(term.order)
    return max(orders)


def _leading_key(monomial: Expr, vocabulary: Any):
    if monomial == 1:
        return (1,)
    powers = monomial.as_powers_dict()
    degree = sum(int(e) for e in powers.values())
    order = _order_of(monomial, vocabulary)
    return (0, -order, degree, sympy.default_sort_key(monomial))


@dataclass(frozen=True)
class Relation:
    """A normalized relation expr = 0.

    The leading monomial (highest derivative order, then lowest degree)
    carries coefficient +1, so equal relations have equal expressions.
    """

    expr: Expr
    order: int = 0
    provenance: str = "defining"
    leading: Expr = field(default=sympy.Integer(0), compare=False)

    @classmethod
    def from_expr(
        cls,
        expr: Expr,
        vocabulary: Any = None,
        provenance: str = "defining"
    ) -> Optional["Relation"]:
        """Normalize; None when the relation is trivial (0 = 0)."""
        terms = monomial_terms(expr)
        if not terms:
            return None
        leading = min(terms, key=lambda m: _leading_key(m, vocabulary))
        scale = terms[leading]
        normalized = sympy.expand(sympy.Add(*(c / scale * m for m, c in terms.items())))
        return cls(normalized, _order_of(normalized, vocabulary), provenance, leading)

    @property
    def is_contradiction(self) -> bool:
        """1 = 0."""
        return not self.expr.free_symbols

    @property
    def lhs(self) -> Expr:
        return self.leading

    @property
    def rhs(self) -> Expr:
        return sympy.expand(self.lhs - self.expr)

    def __str__(self) -> str:
        return f"{self.expr} = 0"

    def to_dict(self) -> Dict[str, Any]:
        return {"relation": str(self.expr), "order": self.order, "provenance": self.provenance}


class RelationSet:
    """Relations of one geometry, grouped by derivative order.

    Attributes:
        vocabulary: Vocabulary the symbols belong to
        name: Label for reports
        geometry: Geometry the relations were derived from, when known
        incompatible: Relations that reduce to 1 = 0
        closed: Whether derivatives of the relations were added up to truncation
        order: Derivative order the set was closed to
    """

    def __init__(self, vocabulary: Any, name: str = "", geometry: Any = None):
        self.vocabulary = vocabulary
        self.name = name
        self.geometry = geometry
        self.relations: List[Relation] = []
        self.incompatible: List[Relation] = []
        self.closed = False
        self.order: Optional[int] = None
        self._keys: Dict[Expr, Relation] = {}
        self._reducers: Dict[int, Reducer] = {}

    def add(self, relation: Optional[Relation]) -> bool:
        """Add a normalized relation; returns False for trivial or known ones."""
        if relation is None or relation.expr in self._keys:
            return False
        if relation.is_contradiction:
            logger.warning(f"{self.name}: incompatible relation from {relation.provenance}")
            self.incompatible.append(relation)
            return False
        self._keys[relation.expr] = relation
        self.relations.append(relation)
        self._reducers.clear()
        return True

    def add_expr(self, expr: Expr, provenance: str = "defining") -> bool:
        return self.add(Relation.from_expr(expr, self.vocabulary, provenance))

    def extend(self, relations: Iterable[Relation]) -> int:
        return sum(1 for r in relations if self.add(r))

    def merge(self, other: "RelationSet", name: Optional[str] = None) -> "RelationSet":
        merged = RelationSet(self.vocabulary, name or self.name, self.geometry)
        merged.extend(self.relations)
        merged.extend(other.relations)
        merged.incompatible = self.incompatible + other.incompatible
        return merged

    @property
    def exprs(self) -> List[Expr]:
        return [r.expr for r in self.relations]

    @property
    def is_consistent(self) -> bool:
        return not self.incompatible and self.reducer().incompatible is None

    def by_order(self) -> Dict[int, List[Relation]]:
        grouped: Dict[int, List[Relation]] = {}
        for relation in self.relations:
            grouped.setdefault(relation.order, []).append(relation)
        return dict(sorted(grouped.items()))

    def reducer(self, table: Any = None) -> Reducer:
        """Rewriting system of the set, cached until the set changes."""
        key = id(table)
        cached = self._reducers.get(key)
        if cached is None:
            cached = Reducer(self.exprs, self.vocabulary, table)
            self._reducers[key] = cached
        return cached

    def normal_form(self, expr: Expr) -> Expr:
        return self.reducer().normal_form(expr)

    def implies(self, expr: Expr) -> bool:
        """Whether expr = 0 follows by rewriting."""
        return self.reducer().is_zero(expr)

    def sorted(self) -> List[Relation]:
        return sorted(self.relations, key=lambda r: (r.order, sympy.default_sort_key(r.expr)))

    def __len__(self) -> int:
        return len(self.relations)

    def __iter__(self) -> Iterator[Relation]:
        return iter(self.relations)

    def __contains__(self, expr: Expr) -> bool:
        relation = Relation.from_expr(expr, self.vocabulary)
        return relation is None or relation.expr in self._keys

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "closed": self.closed,
            "counts": {str(k): len(v) for k, v in self.by_order().items()},
            "relations": [r.to_dict() for r in self.sorted()],
            "incompatible": [r.to_dict() for r in self.incompatible],
        }

    def to_markdown(self) -> str:
        lines = [f"# {self.name or 'Relations'}", ""]
        if self.incompatible:
            lines.append("**No integral variety:** the relations reduce to 1 = 0.")
            lines.append("")
        for order, relations in self.by_order().items():
            lines.append(f"## Order {order} ({len(relations)})")
            lines.append("")
            for relation in sorted(relations, key=lambda r: sympy.default_sort_key(r.expr)):
                lines.append(f"- `{relation.expr} = 0`  _{relation.provenance}_")
            lines.append("")
        return "\n".join(lines)
