"""Exterior algebra over a finite coframe with invariant polynomial coefficients."""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Tuple
import sympy
from sympy import Expr

logger = logging.getLogger(__name__)

HORIZONTAL = "horizontal"
VERTICAL = "vertical"
SCALE = "scale"
KINDS = (HORIZONTAL, VERTICAL, SCALE)

Wedge = Tuple["CoframeGenerator", ...]


@dataclass(frozen=True)
class CoframeGenerator:
    """One coframe one-form, e.g. pi[1], omega[3,4] or tau.

    Generators compare by family, indices and kind; position is the
    declaration rank that orders wedge monomials.
    """

    family: str
    indices: Tuple[int, ...] = ()
    kind: str = HORIZONTAL
    position: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Unknown generator kind '{self.kind}'")

    @property
    def name(self) -> str:
        if not self.indices:
            return self.family
        return f"{self.family}[{','.join(str(i) for i in self.indices)}]"

    @property
    def is_horizontal(self) -> bool:
        return self.kind == HORIZONTAL

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"CoframeGenerator({self.name})"


def sort_wedge(gens: Iterable[CoframeGenerator]) -> Tuple[int, Optional[Wedge]]:
    """Sort a wedge monomial by declaration rank, returning (sign, monomial).

    A repeated generator gives (0, None).
    """
    items = list(gens)
    if len(set(items)) != len(items):
        return 0, None
    sign = 1
    # insertion sort, counting transpositions
    for k in range(1, len(items)):
        current = items[k]
        j = k - 1
        while j >= 0 and items[j].position > current.position:
            items[j + 1] = items[j]
            sign = -sign
            j -= 1
        items[j + 1] = current
    return sign, tuple(items)


class FormExpr:
    """Graded exterior polynomial: wedge monomial -> invariant polynomial coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Wedge, Expr]] = None):
        self.terms: Dict[Wedge, Expr] = {}
        if terms:
            for wedge, coeff in terms.items():
                self._accumulate(wedge, coeff)
            self._prune()

    def _accumulate(self, wedge: Iterable[CoframeGenerator], coeff: Expr) -> None:
        sign, ordered = sort_wedge(wedge)
        if sign == 0:
            return
        if ordered in self.terms:
            self.terms[ordered] = self.terms[ordered] + sign * coeff
        else:
            self.terms[ordered] = sign * coeff

    def _prune(self) -> None:
        grades = set()
        for wedge in list(self.terms):
            coeff = sympy.expand(self.terms[wedge])
            if coeff == 0:
                del self.terms[wedge]
            else:
                self.terms[wedge] = coeff
                grades.add(len(wedge))
        if len(grades) > 1:
            raise ValueError(f"Mixed grades {sorted(grades)} in one form")

    @classmethod
    def zero(cls) -> "FormExpr":
        return cls()

    @classmethod
    def scalar(cls, value) -> "FormExpr":
        return cls({(): sympy.sympify(value)})

    @classmethod
    def generator(cls, gen: CoframeGenerator, coeff=1) -> "FormExpr":
        return cls({(gen,): sympy.sympify(coeff)})

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Expr, Iterable[CoframeGenerator]]]) -> "FormExpr":
        """Build from (coefficient, generators) pairs in any order."""
        form = cls()
        for coeff, gens in terms:
            form._accumulate(tuple(gens), sympy.sympify(coeff))
        form._prune()
        return form

    @property
    def grade(self) -> int:
        for wedge in self.terms:
            return len(wedge)
        return 0

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> Iterator[Tuple[Wedge, Expr]]:
        return iter(self.terms.items())

    def coefficient(self, *gens: CoframeGenerator) -> Expr:
        """Coefficient of a wedge monomial given in any order."""
        sign, ordered = sort_wedge(gens)
        if sign == 0:
            return sympy.Integer(0)
        return sign * self.terms.get(ordered, sympy.Integer(0))

    def generators(self) -> List[CoframeGenerator]:
        seen = {g for wedge in self.terms for g in wedge}
        return sorted(seen, key=lambda g: g.position)

    def map_coefficients(self, fn) -> "FormExpr":
        return FormExpr({w: fn(c) for w, c in self.terms.items()})

    def subs(self, mapping) -> "FormExpr":
        return self.map_coefficients(lambda c: c.xreplace(mapping))

    def __add__(self, other: "FormExpr") -> "FormExpr":
        if not isinstance(other, FormExpr):
            other = FormExpr.scalar(other)
        result = FormExpr()
        result.terms = dict(self.terms)
        for wedge, coeff in other.terms.items():
            result.terms[wedge] = result.terms.get(wedge, 0) + coeff
        result._prune()
        return result

    __radd__ = __add__

    def __neg__(self) -> "FormExpr":
        result = FormExpr()
        result.terms = {w: -c for w, c in self.terms.items()}
        return result

    def __sub__(self, other: "FormExpr") -> "FormExpr":
        if not isinstance(other, FormExpr):
            other = FormExpr.scalar(other)
        return self + (-other)

    def __mul__(self, scalar) -> "FormExpr":
        """Multiplication by a zero-form coefficient."""
        if isinstance(scalar, FormExpr):
            return wedge(self, scalar)
        value = sympy.sympify(scalar)
        return FormExpr({w: c * value for w, c in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other: "FormExpr") -> "FormExpr":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormExpr):
            if other == 0:
                return self.is_zero()
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for wedge, coeff in sorted(self.terms.items(), key=lambda kv: [g.position for g in kv[0]]):
            basis = "^".join(g.name for g in wedge) or "1"
            parts.append(f"({coeff})*{basis}")
        return " + ".join(parts)

    __repr__ = __str__


def wedge(a: FormExpr, b: FormExpr) -> FormExpr:
    """Bilinear exterior product in sorted canonical form."""
    result = FormExpr()
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            result._accumulate(wa + wb, ca * cb)
    result._prune()
    return result


def wedge_all(*forms: FormExpr) -> FormExpr:
    result = FormExpr.scalar(1)
    for form in forms:
        result = wedge(result, form)
    return result


class VectorField:
    """Dual-basis expansion V = sum V[g] I_g over coframe generators."""

    def __init__(self, components: Optional[Dict[CoframeGenerator, Expr]] = None):
        self.components: Dict[CoframeGenerator, Expr] = {
            g: sympy.sympify(v) for g, v in (components or {}).items() if sympy.sympify(v) != 0
        }

    def component(self, gen: CoframeGenerator) -> Expr:
        return self.components.get(gen, sympy.Integer(0))

    def __str__(self) -> str:
        return " + ".join(f"({v})*I[{g.name}]" for g, v in self.components.items()) or "0"


def interior(vector: VectorField, expr: FormExpr) -> FormExpr:
    """Interior product, an antiderivation of degree -1."""
    result = FormExpr()
    for wedge_term, coeff in expr.terms.items():
        for r, gen in enumerate(wedge_term):
            value = vector.component(gen)
            if value == 0:
                continue
            rest = wedge_term[:r] + wedge_term[r + 1:]
            sign = -1 if r % 2 else 1
            result._accumulate(rest, sign * value * coeff)
    result._prune()
    return result


def extract_coefficients(
    expr: FormExpr,
    grade_basis: Optional[Iterable[Wedge]] = None
) -> Dict[Wedge, Expr]:
    """Decomposition over wedge monomials.

    With a basis, every basis monomial is listed (zero when absent) and terms
    outside the basis are kept so that reassembling reproduces the form.
    """
    coefficients: Dict[Wedge, Expr] = {}
    if grade_basis is not None:
        for basis_wedge in grade_basis:
            sign, ordered = sort_wedge(basis_wedge)
            if sign != 0:
                coefficients[ordered] = sign * expr.terms.get(ordered, sympy.Integer(0))
    for wedge_term, coeff in expr.terms.items():
        coefficients.setdefault(wedge_term, coeff)
    return coefficients


def horizontal_part(expr: FormExpr) -> FormExpr:
    """Terms built from horizontal generators only."""
    return FormExpr({w: c for w, c in expr.terms.items() if all(g.is_horizontal for g in w)})


def vertical_part(expr: FormExpr) -> FormExpr:
    """Terms containing at least one non-horizontal generator."""
    return FormExpr({w: c for w, c in expr.terms.items() if not all(g.is_horizontal for g in w)})


class Coframe:
    """Ordered coframe generators with lookup by family and indices."""

    def __init__(self):
        self._generators: List[CoframeGenerator] = []
        self._index: Dict[Tuple[str, Tuple[int, ...]], CoframeGenerator] = {}
        self._families: Dict[Tuple[str, int], str] = {}

    def add(
        self,
        family: str,
        indices: Tuple[int, ...] = (),
        kind: str = HORIZONTAL
    ) -> CoframeGenerator:
        key = (family, tuple(indices))
        if key in self._index:
            raise ValueError(f"Generator {family}{list(indices)} declared twice")
        # omega[i] and omega[i,j] may differ in kind, one arity may not
        arity = (family, len(key[1]))
        known = self._families.get(arity)
        if known is not None and known != kind:
            raise ValueError(f"Family '{family}' mixes kinds {known} and {kind}")
        gen = CoframeGenerator(family, tuple(indices), kind, len(self._generators))
        self._generators.append(gen)
        self._index[key] = gen
        self._families[arity] = kind
        return gen

    def get(self, family: str, *indices: int) -> CoframeGenerator:
        try:
            return self._index[(family, tuple(indices))]
        except KeyError:
            raise KeyError(f"No generator {family}{list(indices)}")

    def has(self, family: str, *indices: int) -> bool:
        return (family, tuple(indices)) in self._index

    def form(self, family: str, *indices: int) -> FormExpr:
        return FormExpr.generator(self.get(family, *indices))

    def antisymmetric(self, family: str, x: int, y: int) -> FormExpr:
        """Signed component of an antisymmetric two-index family (zero on the diagonal)."""
        if x == y:
            return FormExpr()
        if x < y:
            return self.form(family, x, y)
        return -self.form(family, y, x)

    def by_name(self, name: str) -> CoframeGenerator:
        for gen in self._generators:
            if gen.name == name:
                return gen
        raise KeyError(f"No generator named '{name}'")

    @property
    def families(self) -> List[str]:
        return list(dict.fromkeys(family for family, _ in self._families))

    def of_kind(self, kind: str) -> List[CoframeGenerator]:
        return [g for g in self._generators if g.kind == kind]

    def __iter__(self) -> Iterator[CoframeGenerator]:
        return iter(self._generators)

    def __len__(self) -> int:
        return len(self._generators)


