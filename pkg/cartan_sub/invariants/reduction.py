"""Linear rewriting of invariant polynomials modulo a relation set."""
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple
import sympy
from sympy import Expr
from cartan_sub.core.errors import CyclicRewritingError
from cartan_sub.invariants.canonical import seed_form
from cartan_sub.utils.linalg import rref

logger = logging.getLogger(__name__)

MAX_PASSES = 12


def monomial_terms(expr: Expr) -> Dict[Expr, sympy.Rational]:
    """Expanded polynomial as monomial -> rational coefficient."""
    expanded = sympy.expand(expr)
    if expanded == 0:
        return {}
    terms: Dict[Expr, sympy.Rational] = {}
    for term in sympy.Add.make_args(expanded):
        coeff, monomial = term.as_coeff_Mul()
        terms[monomial] = terms.get(monomial, 0) + coeff
    return {m: c for m, c in terms.items() if c != 0}


class Reducer:
    """Rewriting system built from relations by ordered Gauss-Jordan elimination.

    Monomials are ordered highest derivative order first, then lowest degree,
    then table-dependent before table-independent; the constant goes last. A
    reduced row led by a single symbol becomes the rule symbol -> rest; other
    rows stay as residual linear reductions. Rules are substituted into
    products and the elimination repeated until nothing changes.
    """

    def __init__(
        self,
        relations: Sequence[Expr],
        vocabulary: Any,
        table: Any = None,
        max_passes: int = MAX_PASSES
    ):
        self.vocabulary = vocabulary
        self.table = table
        self.max_passes = max_passes
        self.rules: Dict[sympy.Symbol, Expr] = {}
        self.residual: List[Tuple[Expr, Dict[Expr, sympy.Rational]]] = []
        self.incompatible: Optional[Expr] = None
        self._keys: Dict[Expr, Tuple] = {}
        self._build([sympy.expand(r) for r in relations if sympy.expand(r) != 0])

    def _order(self, sym: sympy.Symbol) -> int:
        term = self.vocabulary.parse(sym) if self.vocabulary is not None else None
        return term.order if term is not None else 0

    def _dependency(self, sym: sympy.Symbol) -> int:
        """0 when the table says the symbol is not a normal term."""
        if self.table is None or self.vocabulary is None:
            return 1
        term = self.vocabulary.parse(sym)
        if term is None or not self.table.covers(term):
            return 1
        return 1 if seed_form(term, self.table) is not None else 0

    def column_key(self, monomial: Expr) -> Tuple:
        cached = self._keys.get(monomial)
        if cached is not None:
            return cached
        if monomial == 1:
            key = (1,)
        else:
            powers = monomial.as_powers_dict()
            degree = sum(int(e) for e in powers.values())
            max_order = max(self._order(s) for s in powers)
            dependency = self._dependency(monomial) if degree == 1 else 1
            key = (0, -max_order, degree, dependency, sympy.default_sort_key(monomial))
        self._keys[monomial] = key
        return key

    def _eliminate(self, exprs: List[Expr]) -> Tuple[List[Dict[Expr, sympy.Rational]], List[Expr]]:
        term_rows = [monomial_terms(e) for e in exprs]
        columns = sorted({m for row in term_rows for m in row}, key=self.column_key)
        index = {m: k for k, m in enumerate(columns)}
        rows = [{index[m]: c for m, c in row.items()} for row in term_rows if row]
        reduced, pivots = rref(rows, len(columns))
        result = [{columns[j]: c for j, c in row.items()} for row in reduced]
        return result, [columns[p] for p in pivots]

    def _build(self, exprs: List[Expr]) -> None:
        for attempt in range(self.max_passes):
            rows, pivots = self._eliminate(exprs)
            rules: Dict[sympy.Symbol, Expr] = {}
            residual: List[Tuple[Expr, Dict[Expr, sympy.Rational]]] = []
            incompatible = None
            for row, pivot in zip(rows, pivots):
                if pivot == 1:
                    incompatible = sum(c * m for m, c in row.items())
                    continue
                if pivot.is_Symbol:
                    rules[pivot] = -sum(c * m for m, c in row.items() if m != pivot)
                else:
                    residual.append((pivot, row))
            self.rules, self.residual, self.incompatible = rules, residual, incompatible
            current = [sympy.expand(sum(c * m for m, c in row.items())) for row in rows]
            updated = [
                self._substitute(expr, pivot, rules)
                for expr, pivot in zip(current, pivots)
            ]
            updated = [e for e in updated if e != 0]
            if set(updated) == set(current):
                logger.debug(
                    f"Reducer stable after {attempt + 1} passes: "
                    f"{len(rules)} rules, {len(residual)} residual rows"
                )
                return
            exprs = updated
        raise CyclicRewritingError(self.max_passes)

    @staticmethod
    def _substitute(expr: Expr, pivot: Expr, rules: Dict[sympy.Symbol, Expr]) -> Expr:
        """Rules applied inside products; a rule row keeps its own lead symbol."""
        if pivot in rules:
            others = {s: v for s, v in rules.items() if s != pivot}
            return sympy.expand(pivot - sympy.sympify(rules[pivot]).xreplace(others))
        return sympy.expand(expr.xreplace(rules))

    def normal_form(self, expr: Expr) -> Expr:
        """Rewrite with the rules, then reduce linearly by the residual rows."""
        current = sympy.expand(sympy.sympify(expr))
        for _ in range(self.max_passes):
            updated = sympy.expand(current.xreplace(self.rules))
            if updated == current:
                break
            current = updated
        else:
            raise CyclicRewritingError(self.max_passes)
        if not self.residual:
            return current
        terms = monomial_terms(current)
        for pivot, row in self.residual:
            coeff = terms.get(pivot, 0)
            if coeff == 0:
                continue
            for m, c in row.items():
                terms[m] = terms.get(m, 0) - coeff * c
        return sympy.Add(*(c * m for m, c in terms.items() if c != 0))

    def is_zero(self, expr: Expr) -> bool:
        return self.normal_form(expr) == 0


def reduce_modulo(term: Expr, relations: Any) -> Expr:
    """Normal form of a term modulo a RelationSet."""
    return relations.reducer().normal_form(term)
