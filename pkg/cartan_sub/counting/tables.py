"""Seed tables: independent terms of each invariant and the involutive seeds."""
import logging
import re
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import sympy
from cartan_sub.core.errors import (
    HeadNotInTableError,
    InvalidParametersError,
    InvolutiveOrderingError,
)
from cartan_sub.invariants.symbols import IndexClass, IndexedInvariant

logger = logging.getLogger(__name__)

TIME = "0"
RIEMANN_ORDER = "{0}>{1}, {2}>{3}, {0}>={2}, {1}>={3}"

_LABEL = re.compile(r"^(\w+?)\[([^;\]]*)(?:;([^\]]*))?\]$")
_COMPARISON = re.compile(r"^\s*(\w+)\s*(>=|<=|!=|>|<|=)\s*(max-1|max|\w+)\s*$")
_OPS: Dict[str, Callable[[int, int], bool]] = {
    ">": lambda x, y: x > y,
    ">=": lambda x, y: x >= y,
    "<": lambda x, y: x < y,
    "<=": lambda x, y: x <= y,
    "=": lambda x, y: x == y,
    "!=": lambda x, y: x != y,
}

Comparison = Tuple[str, str, str]


def riemann(*letters: str) -> str:
    """Normal-order condition of a Riemann tensor on four letters."""
    return RIEMANN_ORDER.format(*letters)


def _parse_condition(condition: str) -> Tuple[Tuple[Comparison, ...], ...]:
    """'i>j, a<max or b<max' -> clauses of alternatives."""
    text = condition.strip()
    if text in ("", "all"):
        return ()
    clauses = []
    for clause in text.split(","):
        alternatives = []
        for alternative in clause.split(" or "):
            match = _COMPARISON.match(alternative)
            if not match:
                raise ValueError(f"Cannot parse seed condition '{alternative.strip()}'")
            alternatives.append(match.groups())
        clauses.append(tuple(alternatives))
    return tuple(clauses)


@dataclass(frozen=True)
class SeedRow:
    """One row of a seed table, e.g. K[i,a,b;c,d] with a>=b, b>=c, c>=d.

    Letters name the slots and derivative indices in order; the literal 0
    stands for the time index.
    """

    label: str
    condition: str = "all"
    seed: bool = False
    note: str = ""

    @property
    def head(self) -> str:
        return self._parts[0]

    @property
    def slot_letters(self) -> Tuple[str, ...]:
        return self._parts[1]

    @property
    def deriv_letters(self) -> Tuple[str, ...]:
        return self._parts[2]

    @property
    def letters(self) -> Tuple[str, ...]:
        return self.slot_letters + self.deriv_letters

    @property
    def _parts(self) -> Tuple[str, Tuple[str, ...], Tuple[str, ...]]:
        match = _LABEL.match(self.label.replace(" ", ""))
        if not match:
            raise ValueError(f"Malformed seed row label '{self.label}'")
        head, slots, derivs = match.groups()
        split = lambda text: tuple(t for t in (text or "").split(",") if t)
        return head, split(slots), split(derivs)

    @property
    def clauses(self) -> Tuple[Tuple[Comparison, ...], ...]:
        return _parse_condition(self.condition)

    def restrict(self, extra: str) -> "SeedRow":
        """Row with an additional condition."""
        condition = extra if self.condition.strip() in ("", "all") else f"{self.condition}, {extra}"
        return replace(self, condition=condition)


@dataclass(frozen=True)
class FixedContribution:
    """Seeds counted by a known formula rather than enumerated.

    Contributes count(extent) at rank maximum - below of the given class.
    """

    label: str
    cls: str
    below: int
    count: Callable[[int], int]
    note: str = ""


@dataclass
class SeedTable:
    """
    Rows of independent terms with the involutive ordering of index classes.

    Attributes:
        name: Table name, e.g. "RiemannianSubmersion"
        params: Dimension parameters the extents are written in
        extents: Index class -> extent expression in the parameters
        ordering: Index classes in increasing involutive rank
        outranks: (lower, higher) class pairs the ordering must respect
        letters: Letter -> index class name
        rows: Table rows; rows with seed=True are the involutive seeds
        fixed: Formula-counted seed blocks
        truncation: Derivative order the table is complete to
        constraint: Constraint spec(s) applied, if any
    """

    name: str
    params: Tuple[str, ...]
    extents: Dict[str, str]
    ordering: Tuple[str, ...]
    letters: Dict[str, str]
    rows: List[SeedRow]
    outranks: Tuple[Tuple[str, str], ...] = ()
    fixed: List[FixedContribution] = field(default_factory=list)
    truncation: int = 2
    constraint: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def check_ordering(self) -> None:
        """Rank monotonicity: every class ranked once, declared precedences kept."""
        if len(set(self.ordering)) != len(self.ordering):
            raise InvolutiveOrderingError(self.name, f"class ranked twice in {self.ordering}")
        used = {self.class_of(letter) for row in self.rows for letter in row.letters}
        missing = sorted(used - set(self.ordering))
        if missing:
            raise InvolutiveOrderingError(self.name, f"classes {missing} have no rank")
        rank = {name: k for k, name in enumerate(self.ordering)}
        for low, high in self.outranks:
            if rank.get(low, -1) >= rank.get(high, -1):
                logger.error(f"{self.name}: class '{high}' must outrank '{low}'")
                raise InvolutiveOrderingError(
                    self.name, f"'{high}' indices must outrank '{low}' indices"
                )

    def class_of(self, letter: str) -> str:
        if letter == TIME:
            return TIME
        try:
            return self.letters[letter[0]]
        except KeyError:
            raise ValueError(f"Letter '{letter}' has no index class in table {self.name}")

    def dims(self, **values: Optional[int]) -> Dict[str, int]:
        """Parameter values, filling n from p (and p from n) for flow tables."""
        given = {k: v for k, v in values.items() if v is not None}
        if "n" in self.params and "n" not in given and "p" in given:
            given["n"] = given["p"] + 1
        if "p" in self.params and "p" not in given and "n" in given:
            given["p"] = given["n"] - 1
        missing = [k for k in self.params if k not in given]
        if missing:
            raise InvalidParametersError(self.name, f"missing {', '.join(missing)}")
        return {k: int(given[k]) for k in self.params}

    def classes(self, dims: Dict[str, int]) -> Dict[str, IndexClass]:
        """Concrete index classes, offsets accumulated in rank order."""
        classes: Dict[str, IndexClass] = {}
        offset = 0
        for name in self.ordering:
            extent = int(sympy.sympify(self.extents[name]).subs(dims))
            if extent < 0:
                raise InvalidParametersError(
                    self.name, f"class '{name}' has negative extent {extent}"
                )
            classes[name] = IndexClass(name, extent, offset)
            offset += extent
        return classes

    def rank_count(self, dims: Dict[str, int]) -> int:
        """Number of characters s_1..s_N."""
        return sum(c.extent for c in self.classes(dims).values())

    def heads(self) -> List[str]:
        return list(dict.fromkeys(row.head for row in self.rows))

    def rows_for(self, head: str) -> List[SeedRow]:
        rows = [row for row in self.rows if row.head == head]
        if not rows:
            raise HeadNotInTableError(head, self.name)
        return rows

    def row_values(self, row: SeedRow, classes: Dict[str, IndexClass]) -> List[range]:
        ranges = []
        for letter in row.letters:
            cls = classes[self.class_of(letter)]
            if letter == TIME:
                ranges.append(range(cls.maximum, cls.maximum + 1))
            else:
                ranges.append(cls.values())
        return ranges

    def satisfies(
        self,
        row: SeedRow,
        values: Sequence[int],
        classes: Dict[str, IndexClass]
    ) -> bool:
        """Whether a concrete index tuple meets the row's condition."""
        bound = {}
        for letter, value in zip(row.letters, values):
            if letter == TIME:
                continue
            if letter in bound and bound[letter] != value:
                return False
            bound[letter] = value
        for clause in row.clauses:
            if not any(self._compare(c, bound, classes) for c in clause):
                return False
        return True

    def _compare(
        self,
        comparison: Comparison,
        bound: Dict[str, int],
        classes: Dict[str, IndexClass]
    ) -> bool:
        left, op, right = comparison
        x = bound[left]
        if right in ("max", "max-1"):
            top = classes[self.class_of(left)].maximum
            y = top if right == "max" else top - 1
        elif right.isdigit():
            y = classes[self.class_of(left)].offset + int(right)
        else:
            y = bound[right]
        return _OPS[op](x, y)

    def _matching_row(self, term: IndexedInvariant) -> Optional[SeedRow]:
        names = [c.name for c in term.symbol.slots] + [c.name for c in term.deriv_slots]
        for row in self.rows:
            if row.head != term.head or len(row.letters) != len(names):
                continue
            if len(row.slot_letters) != len(term.indices):
                continue
            if [self.class_of(letter) for letter in row.letters] == names:
                return row
        return None

    def covers(self, term: IndexedInvariant) -> bool:
        """Whether some row describes instances shaped like the term."""
        return self._matching_row(term) is not None

    def accepts(self, term: IndexedInvariant) -> bool:
        """Whether the term, with its index values, is an independent term."""
        row = self._matching_row(term)
        if row is None:
            return False
        classes = {c.name: c for c in list(term.symbol.slots) + list(term.deriv_slots)}
        values = list(term.indices) + list(term.derivs)
        if not all(isinstance(v, int) for v in values):
            return False
        for letter, value in zip(row.letters, values):
            if letter == TIME and value != classes[TIME].maximum:
                return False
        return self.satisfies(row, values, classes)

    def to_rows(self) -> List[Dict[str, str]]:
        rows = [
            {"invariant": r.label, "independent": r.condition, "seed": "yes" if r.seed else "no"}
            for r in self.rows
        ]
        rows.extend(
            {"invariant": f.label, "independent": f.note or "counted by formula", "seed": "yes"}
            for f in self.fixed
        )
        return rows


def einstein_character(d: int) -> int:
    """Top-minus-one character of a d-dimensional Riemannian space with given Ricci tensor."""
    return d * (d - 3) if d >= 3 else 0


def _riemannian_submersion_rows() -> List[SeedRow]:
    return [
        SeedRow("M[i,j,a]", "i>j"),
        SeedRow("K[i,a,b]", "a>=b"),
        SeedRow("S_base[i,j,k,l]", riemann("i", "j", "k", "l")),
        SeedRow("S_fibre[a,b,c,d]", riemann("a", "b", "c", "d")),
        SeedRow("M[i,j,a;b]", "i>j, a>b"),
        SeedRow("M[i,j,a;k]", "i>j, i>=k"),
        SeedRow("K[i,a,b;c]", "a>=b"),
        SeedRow("K[i,a,b;j]", "a>=b"),
        SeedRow("S_fibre[a,b,c,d;i]", riemann("a", "b", "c", "d"), seed=True),
        SeedRow("S_base[i,j,k,l;m]", riemann("i", "j", "k", "l") + ", k>=m", seed=True),
        SeedRow("S_fibre[a,b,c,d;e]", riemann("a", "b", "c", "d") + ", c>=e", seed=True),
        SeedRow("M[i,j,a;k,l]", "i>j, i>=k, k>=l", seed=True),
        SeedRow("M[i,j,a;b,k]", "a>b, i>j, i>=k", seed=True),
        SeedRow("K[i,a,b;j,k]", "a>=b, j>=k", seed=True),
        SeedRow("K[i,a,b;c,j]", "a>=b", seed=True),
        SeedRow("K[i,a,b;c,d]", "a>=b, b>=c, c>=d", seed=True),
    ]


def riemannian_submersion_table() -> SeedTable:
    """Gluing invariants to second order, curvatures to first order."""
    return SeedTable(
        name="RiemannianSubmersion",
        params=("p", "q"),
        extents={"i": "p", "a": "q"},
        ordering=("i", "a"),
        outranks=(("i", "a"),),
        letters={**{x: "i" for x in "ijklmn"}, **{x: "a" for x in "abcdef"}},
        rows=_riemannian_submersion_rows(),
        truncation=2,
    )


def riemannian_table() -> SeedTable:
    return SeedTable(
        name="Riemannian",
        params=("n",),
        extents={"m": "n"},
        ordering=("m",),
        letters={x: "m" for x in "ijklmn"},
        rows=[
            SeedRow("R[i,j,k,l]", riemann("i", "j", "k", "l")),
            SeedRow("R[i,j,k,l;m]", riemann("i", "j", "k", "l") + ", k>=m", seed=True),
        ],
        truncation=1,
    )


def weyl_table() -> SeedTable:
    return SeedTable(
        name="Weyl",
        params=("n",),
        extents={"m": "n"},
        ordering=("m",),
        letters={x: "m" for x in "ijklmn"},
        rows=[
            SeedRow("F[i,j]", "i>j"),
            SeedRow("R[i,j,k,l]", riemann("i", "j", "k", "l")),
            SeedRow("F[i,j;k]", "i>j, i>=k", seed=True),
            SeedRow("R[i,j,k,l;m]", riemann("i", "j", "k", "l") + ", k>=m", seed=True),
        ],
        truncation=1,
    )


def _flow_table(name: str, rows: List[SeedRow]) -> SeedTable:
    return SeedTable(
        name=name,
        params=("n",),
        extents={"i": "n-1", TIME: "1"},
        ordering=("i", TIME),
        outranks=(("i", TIME),),
        letters={x: "i" for x in "ijklmn"},
        rows=rows,
        truncation=1,
    )


def born_rigid_table() -> SeedTable:
    return _flow_table("BornRigid", [
        SeedRow("M[i,j]", "i>j"),
        SeedRow("K[i]"),
        SeedRow("S[i,j,k,l]", riemann("i", "j", "k", "l")),
        SeedRow("M[i,j;k]", "i>j, i>=k", seed=True),
        SeedRow("K[i;0]", seed=True),
        SeedRow("K[i;j]", seed=True),
        SeedRow("S[i,j,k,l;m]", riemann("i", "j", "k", "l") + ", k>=m", seed=True),
    ])


def weyl_submersion_table() -> SeedTable:
    table = _flow_table("WeylSubmersionCodim1", [
        SeedRow("E0[]"),
        SeedRow("M[i,j]", "i>j"),
        SeedRow("K[i]"),
        SeedRow("S[i,j,k,l]", riemann("i", "j", "k", "l")),
        SeedRow("G[i,j]", "i>j"),
        SeedRow("E0[;i]"),
        SeedRow("E0[;0]"),
        SeedRow("M[i,j;k]", "i>j, i>=k"),
        SeedRow("K[i;0]"),
        SeedRow("K[i;j]"),
        SeedRow("S[i,j,k,l;m]", riemann("i", "j", "k", "l") + ", k>=m", seed=True),
        SeedRow("G[i,j;k]", "i>j, i>=k", seed=True),
        SeedRow("M[i,j;k,l]", "i>j, i>=k, k>=l", seed=True),
        SeedRow("K[i;j,k]", "j>=k", seed=True),
        SeedRow("K[i;0,j]", seed=True),
        SeedRow("K[i;0,0]", seed=True),
        SeedRow("E0[;i,j]", "i>=j", seed=True),
        SeedRow("E0[;0,i]", seed=True),
        SeedRow("E0[;0,0]", seed=True),
    ])
    table.truncation = 2
    return table


TABLES: Dict[str, Callable[[], SeedTable]] = {
    "RiemannianSubmersion": riemannian_submersion_table,
    "Riemannian": riemannian_table,
    "Weyl": weyl_table,
    "BornRigid": born_rigid_table,
    "WeylSubmersionCodim1": weyl_submersion_table,
}


def seed_table(name: str) -> SeedTable:
    """Seed table of a built-in geometry (names and aliases as for builtin())."""
    from cartan_sub.geometries.builtins import resolve_name

    canonical = resolve_name(name)
    factory = TABLES.get(canonical)
    if factory is None:
        logger.error(f"No seed table for {canonical}")
        raise InvalidParametersError(canonical, "no seed table for this geometry")
    table = factory()
    table.check_ordering()
    return table
