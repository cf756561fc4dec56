"""Exact rational linear algebra on sparse rows."""
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple
from fractions import Fraction
import sympy
from sympy import QQ, Expr, Rational
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Row = Dict[int, Rational]


def to_qq(value: Any):
    """Convert an int, Fraction or sympy rational to a QQ element."""
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ.from_sympy(sympy.sympify(value))


def sparse_matrix(rows: Sequence[Dict[int, Any]], ncols: int) -> DomainMatrix:
    """Build a sparse DomainMatrix over QQ from dict rows."""
    dod = {}
    for i, row in enumerate(rows):
        entries = {j: to_qq(v) for j, v in row.items() if v != 0}
        if entries:
            dod[i] = entries
    return DomainMatrix(dod, (len(rows), ncols), QQ)


def _sparse_rows(matrix: DomainMatrix) -> Dict[int, Dict[int, Any]]:
    rep = matrix.to_sparse().rep
    return {i: dict(row) for i, row in rep.items()}


def rref(rows: Sequence[Dict[int, Any]], ncols: int) -> Tuple[List[Row], Tuple[int, ...]]:
    """Reduced row echelon form.

    Args:
        rows: Sparse rows (column -> rational)
        ncols: Number of columns

    Returns:
        The nonzero reduced rows and their pivot columns
    """
    if not rows or ncols == 0:
        return [], ()
    reduced, pivots = sparse_matrix(rows, ncols).rref()
    data = _sparse_rows(reduced)
    result = []
    for i in range(len(pivots)):
        row = data.get(i, {})
        result.append({j: QQ.to_sympy(v) for j, v in sorted(row.items())})
    return result, tuple(pivots)


def rank(rows: Sequence[Dict[int, Any]], ncols: int) -> int:
    """Rank over QQ."""
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Dict[int, Any]], ncols: int) -> List[List[Rational]]:
    """Basis of the right nullspace, one free column per vector."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = [Rational(0)] * ncols
        vector[free] = Rational(1)
        for row, pivot in zip(reduced, pivots):
            coeff = row.get(free, 0)
            if coeff != 0:
                vector[pivot] = -coeff
        basis.append(vector)
    return basis


def linear_rows(
    equations: Sequence[Expr],
    unknowns: Sequence[sympy.Symbol],
    allow_constant_terms: bool = False
) -> Tuple[List[Row], List[Expr]]:
    """Split linear equations into coefficient rows and right-hand remainders.

    Every term of each equation must be a rational multiple of an unknown;
    with allow_constant_terms the terms free of unknowns are returned as the
    remainder instead of raising.
    """
    index = {u: k for k, u in enumerate(unknowns)}
    rows: List[Row] = []
    remainders: List[Expr] = []
    for equation in equations:
        row: Row = {}
        remainder = sympy.Integer(0)
        expanded = sympy.expand(equation)
        if expanded == 0:
            rows.append(row)
            remainders.append(remainder)
            continue
        for term in sympy.Add.make_args(expanded):
            coeff, monomial = term.as_coeff_Mul()
            if monomial in index:
                k = index[monomial]
                row[k] = row.get(k, 0) + coeff
                continue
            hits = [u for u in monomial.free_symbols if u in index]
            if hits:
                # unknown times a non-numeric factor
                raise ValueError(f"Term {term} is not linear with rational coefficient")
            if not allow_constant_terms and term.free_symbols:
                raise ValueError(f"Term {term} contains no unknown")
            remainder += term
        rows.append({k: v for k, v in row.items() if v != 0})
        remainders.append(remainder)
    return rows, remainders


class Elimination:
    """Result of eliminating rational-coefficient unknowns from linear equations.

    Attributes:
        unknowns: Unknown symbols in elimination order
        solution: Pivot unknown -> expression in free unknowns and remainders
        conditions: Remainder combinations that must vanish
        pivots: Pivot columns
        rows: Reduced coefficient rows
    """

    def __init__(
        self,
        unknowns: Sequence[sympy.Symbol],
        solution: Dict[sympy.Symbol, Expr],
        conditions: List[Expr],
        pivots: Tuple[int, ...],
        rows: List[Row]
    ):
        self.unknowns = list(unknowns)
        self.solution = solution
        self.conditions = conditions
        self.pivots = pivots
        self.rows = rows

    @property
    def free(self) -> List[sympy.Symbol]:
        pivot_set = set(self.pivots)
        return [u for k, u in enumerate(self.unknowns) if k not in pivot_set]

    def forced_zero(self) -> List[sympy.Symbol]:
        """Unknowns whose solved value is identically zero."""
        return [u for u, value in self.solution.items() if sympy.expand(value) == 0]


def eliminate(
    equations: Sequence[Expr],
    unknowns: Sequence[sympy.Symbol]
) -> Elimination:
    """Gauss-Jordan elimination of unknowns with rational coefficients.

    Terms free of unknowns may carry arbitrary symbolic factors. The
    transformation is tracked so the consistency conditions come out as
    combinations of those terms.
    """
    rows, remainders = linear_rows(equations, unknowns, allow_constant_terms=True)
    n = len(unknowns)
    m = len(rows)
    augmented = []
    for i, row in enumerate(rows):
        extended = dict(row)
        extended[n + i] = 1
        augmented.append(extended)
    reduced, pivots = rref(augmented, n + m)
    coefficient_pivots = tuple(p for p in pivots if p < n)
    solution: Dict[sympy.Symbol, Expr] = {}
    conditions: List[Expr] = []
    coefficient_rows: List[Row] = []
    for row, pivot in zip(reduced, pivots):
        tracked = sympy.Integer(0)
        for j, v in row.items():
            if j >= n:
                tracked += v * remainders[j - n]
        tracked = sympy.expand(tracked)
        if pivot < n:
            value = -tracked
            for j, v in row.items():
                if j < n and j != pivot:
                    value -= v * unknowns[j]
            solution[unknowns[pivot]] = sympy.expand(value)
            coefficient_rows.append({j: v for j, v in row.items() if j < n})
        elif tracked != 0:
            conditions.append(tracked)
    logger.debug(
        f"Eliminated {len(solution)} of {n} unknowns from {m} equations, "
        f"{len(conditions)} conditions"
    )
    return Elimination(unknowns, solution, conditions, coefficient_pivots, coefficient_rows)


def symbolic_nullspace(
    equations: Sequence[Expr],
    unknowns: Sequence[sympy.Symbol]
) -> List[List[Expr]]:
    """Nullspace of a homogeneous system whose coefficients may be symbolic.

    Coefficients live in the fraction field of their symbols, so the result
    describes the solution space at generic values of those symbols.
    """
    if not unknowns:
        return []
    matrix_rows = []
    for equation in equations:
        expanded = sympy.expand(equation)
        if expanded == 0:
            continue
        poly = sympy.Poly(expanded, *unknowns)
        row = [sympy.Integer(0)] * len(unknowns)
        for monom, coeff in poly.terms():
            degree = sum(monom)
            if degree != 1:
                raise ValueError(f"Equation {equation} is not homogeneous linear")
            row[monom.index(1)] = coeff
        matrix_rows.append(row)
    if not matrix_rows:
        return [
            [sympy.Integer(1) if j == k else sympy.Integer(0) for j in range(len(unknowns))]
            for k in range(len(unknowns))
        ]
    matrix = DomainMatrix.from_list_sympy(len(matrix_rows), len(unknowns), matrix_rows)
    basis = matrix.to_field().nullspace()
    return [list(row) for row in basis.to_Matrix().tolist()]


def forced_zero_unknowns(
    equations: Sequence[Expr],
    unknowns: Sequence[sympy.Symbol],
    basis: Optional[List[List[Expr]]] = None
) -> List[sympy.Symbol]:
    """Unknowns that vanish in every solution of a homogeneous system."""
    if basis is None:
        basis = symbolic_nullspace(equations, unknowns)
    forced = []
    for k, u in enumerate(unknowns):
        if all(sympy.simplify(vector[k]) == 0 for vector in basis):
            forced.append(u)
    return forced
