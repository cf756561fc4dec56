"""Index classes, symmetry groups and indexed invariant symbols."""
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union
import sympy
from cartan_sub.core.errors import (
    IndexClassMismatchError,
    TruncationError,
    UndeclaredInvariantError,
)

logger = logging.getLogger(__name__)

Index = Union[int, str]
Permutation = Tuple[int, ...]
SignedPermutation = Tuple[Permutation, int]

_NAME_PATTERN = re.compile(r"^(\w+)\[([^;\]]*)(?:;([^\]]*))?\]$")


@dataclass(frozen=True)
class IndexClass:
    """A range of index values sharing a role (base, fibre, time).

    Concrete classes occupy the integers offset+1 .. offset+extent, so indices
    of different classes never collide and the integer order is the
    involutive ordering rank.
    """

    name: str
    extent: Union[int, str]
    offset: int = 0

    def __post_init__(self):
        if isinstance(self.extent, int) and self.extent < 0:
            raise ValueError(f"Index class '{self.name}' has negative extent")

    @property
    def is_concrete(self) -> bool:
        return isinstance(self.extent, int)

    @property
    def ordering_rank(self) -> int:
        return self.offset

    @property
    def maximum(self) -> int:
        if not self.is_concrete:
            raise ValueError(f"Index class '{self.name}' has symbolic extent {self.extent}")
        return self.offset + self.extent

    def values(self) -> range:
        if not self.is_concrete:
            raise ValueError(f"Index class '{self.name}' has symbolic extent {self.extent}")
        return range(self.offset + 1, self.offset + self.extent + 1)

    def contains(self, index: Index) -> bool:
        if isinstance(index, str):
            return True
        if not self.is_concrete:
            return index > self.offset
        return self.offset < index <= self.offset + self.extent


@dataclass(frozen=True)
class SymmetrySpec:
    """Signed permutation group on the slots of an invariant, given by generators.

    A generator (perm, sign) maps an index tuple idx to
    (idx[perm[0]], idx[perm[1]], ...) with the given sign.
    """

    arity: int
    generators: Tuple[SignedPermutation, ...] = ()

    def group(self) -> Tuple[SignedPermutation, ...]:
        return _close_group(self.arity, self.generators)

    @property
    def degenerate(self) -> bool:
        """True when the identity is reached with sign -1."""
        identity = tuple(range(self.arity))
        return any(perm == identity and sign < 0 for perm, sign in self.group())

    def orbit(self, indices: Sequence[Index]) -> Dict[Tuple[Index, ...], int]:
        """Signed orbit; a tuple reached with both signs maps to 0."""
        orbit: Dict[Tuple[Index, ...], int] = {}
        for perm, sign in self.group():
            image = tuple(indices[k] for k in perm)
            previous = orbit.get(image)
            if previous is None:
                orbit[image] = sign
            elif previous != sign:
                orbit[image] = 0
        return orbit


@lru_cache(maxsize=None)
def _close_group(
    arity: int,
    generators: Tuple[SignedPermutation, ...]
) -> Tuple[SignedPermutation, ...]:
    identity = (tuple(range(arity)), 1)
    seen = {identity}
    frontier = [identity]
    while frontier:
        current = frontier.pop()
        for perm, sign in generators:
            composed = (tuple(current[0][perm[k]] for k in range(arity)), current[1] * sign)
            if composed not in seen:
                seen.add(composed)
                frontier.append(composed)
    return tuple(sorted(seen))


def swap(arity: int, i: int, j: int, sign: int) -> SignedPermutation:
    """Transposition of two slots with a sign."""
    perm = list(range(arity))
    perm[i], perm[j] = perm[j], perm[i]
    return tuple(perm), sign


NO_SYMMETRY = SymmetrySpec(0)
ANTISYM_PAIR = SymmetrySpec(2, (swap(2, 0, 1, -1),))
SYM_PAIR = SymmetrySpec(2, (swap(2, 0, 1, 1),))
RIEMANN = SymmetrySpec(
    4,
    (
        swap(4, 0, 1, -1),
        swap(4, 2, 3, -1),
        ((2, 3, 0, 1), 1),
    ),
)
# Antisymmetric in each pair, without pair exchange
PAIR_ANTISYM = SymmetrySpec(4, (swap(4, 0, 1, -1), swap(4, 2, 3, -1)))


def trivial_symmetry(arity: int) -> SymmetrySpec:
    return SymmetrySpec(arity)


@dataclass(frozen=True)
class InvariantSymbol:
    """Declared invariant head with slot classes, symmetry and scaling weight."""

    head: str
    slots: Tuple[IndexClass, ...]
    symmetry: SymmetrySpec = NO_SYMMETRY
    weight: int = 0
    description: str = ""

    def __post_init__(self):
        if self.symmetry.arity not in (0, len(self.slots)):
            raise ValueError(
                f"Symmetry of '{self.head}' acts on {self.symmetry.arity} slots, "
                f"head has {len(self.slots)}"
            )

    @property
    def effective_symmetry(self) -> SymmetrySpec:
        if self.symmetry.arity == 0:
            return trivial_symmetry(len(self.slots))
        return self.symmetry


@dataclass(frozen=True)
class IndexedInvariant:
    """An invariant instance: head, slot indices and covariant derivative indices."""

    symbol: InvariantSymbol
    indices: Tuple[Index, ...]
    derivs: Tuple[Index, ...] = ()
    sign: int = 1
    deriv_slots: Tuple[IndexClass, ...] = field(default=(), compare=False)

    @property
    def head(self) -> str:
        return self.symbol.head

    @property
    def order(self) -> int:
        return len(self.derivs)

    @property
    def weight(self) -> int:
        return self.symbol.weight + len(self.derivs)

    @property
    def name(self) -> str:
        slots = ",".join(str(i) for i in self.indices)
        if self.derivs:
            return f"{self.head}[{slots};{','.join(str(d) for d in self.derivs)}]"
        return f"{self.head}[{slots}]"

    def as_symbol(self) -> sympy.Symbol:
        return sympy.Symbol(self.name)

    def as_expr(self) -> sympy.Expr:
        return self.sign * self.as_symbol()

    def with_indices(self, indices: Sequence[Index]) -> "IndexedInvariant":
        return IndexedInvariant(self.symbol, tuple(indices), self.derivs, 1, self.deriv_slots)

    def __str__(self) -> str:
        prefix = "-" if self.sign < 0 else ""
        return prefix + self.name


def _parse_index(text: str) -> Index:
    text = text.strip()
    return int(text) if text.lstrip("-").isdigit() else text


class Vocabulary:
    """Declared invariants of one geometry at concrete dimensions.

    Attributes:
        classes: Index classes by name
        deriv_classes: Classes allowed for derivative indices, in rank order
        truncation: Maximal derivative order
    """

    def __init__(
        self,
        classes: Iterable[IndexClass],
        deriv_classes: Optional[Iterable[str]] = None,
        truncation: int = 2
    ):
        self.classes: Dict[str, IndexClass] = {c.name: c for c in classes}
        names = list(deriv_classes) if deriv_classes is not None else list(self.classes)
        self.deriv_classes: Tuple[IndexClass, ...] = tuple(self.classes[n] for n in names)
        self.truncation = truncation
        self._symbols: Dict[str, InvariantSymbol] = {}
        self._by_name: Dict[str, IndexedInvariant] = {}
        self._canonical_cache: Dict[Tuple, sympy.Expr] = {}

    def declare(self, symbol: InvariantSymbol) -> InvariantSymbol:
        if symbol.head in self._symbols:
            raise ValueError(f"Invariant '{symbol.head}' declared twice")
        self._symbols[symbol.head] = symbol
        return symbol

    def declare_head(
        self,
        head: str,
        slot_classes: Sequence[str],
        symmetry: SymmetrySpec = NO_SYMMETRY,
        weight: int = 0,
        description: str = ""
    ) -> InvariantSymbol:
        slots = tuple(self.classes[name] for name in slot_classes)
        return self.declare(InvariantSymbol(head, slots, symmetry, weight, description))

    @property
    def heads(self) -> List[str]:
        return list(self._symbols)

    @property
    def symbols(self) -> List[InvariantSymbol]:
        return list(self._symbols.values())

    def has(self, head: str) -> bool:
        return head in self._symbols

    def symbol(self, head: str) -> InvariantSymbol:
        try:
            return self._symbols[head]
        except KeyError:
            raise UndeclaredInvariantError(head)

    def deriv_class_of(self, index: Index) -> IndexClass:
        if isinstance(index, str):
            return IndexClass(index, "n")
        for cls in self.deriv_classes:
            if isinstance(index, int) and cls.contains(index):
                return cls
        expected = "/".join(c.name for c in self.deriv_classes)
        raise IndexClassMismatchError("derivative", -1, index, expected)

    def term(
        self,
        head: str,
        indices: Sequence[Index],
        derivs: Sequence[Index] = ()
    ) -> IndexedInvariant:
        """Validated, not yet canonical instance."""
        symbol = self.symbol(head)
        indices = tuple(indices)
        derivs = tuple(derivs)
        if len(indices) != len(symbol.slots):
            raise IndexClassMismatchError(head, len(indices), indices, f"{len(symbol.slots)} slots")
        for slot, (cls, index) in enumerate(zip(symbol.slots, indices)):
            if not cls.contains(index):
                raise IndexClassMismatchError(head, slot, index, cls.name)
        if len(derivs) > self.truncation:
            raise TruncationError(head, len(derivs), self.truncation)
        deriv_slots = tuple(self.deriv_class_of(d) for d in derivs)
        return IndexedInvariant(symbol, indices, derivs, 1, deriv_slots)

    def expr(
        self,
        head: str,
        indices: Sequence[Index] = (),
        derivs: Sequence[Index] = ()
    ) -> sympy.Expr:
        """Canonical signed sympy expression of an instance (0 when annihilated)."""
        key = (head, tuple(indices), tuple(derivs))
        cached = self._canonical_cache.get(key)
        if cached is not None:
            return cached
        from cartan_sub.invariants.canonical import canonicalize

        canonical = canonicalize(self.term(head, indices, derivs))
        if canonical is None:
            value = sympy.Integer(0)
        else:
            self._by_name[canonical.name] = canonical.with_indices(canonical.indices)
            value = canonical.as_expr()
        self._canonical_cache[key] = value
        return value

    def instances(self, head: str, derivs: Sequence[Index] = ()) -> List[sympy.Symbol]:
        """All canonical instances of a head with the given derivative indices."""
        from itertools import product

        symbol = self.symbol(head)
        seen = []
        for indices in product(*(cls.values() for cls in symbol.slots)):
            value = self.expr(head, indices, derivs)
            if value == 0:
                continue
            sym = value if value.is_Symbol else -value
            if sym not in seen:
                seen.append(sym)
        return seen

    def parse(self, sym: sympy.Symbol) -> Optional[IndexedInvariant]:
        """Instance for a symbol created by this vocabulary, else None."""
        if not isinstance(sym, sympy.Symbol):
            return None
        known = self._by_name.get(sym.name)
        if known is not None:
            return known
        match = _NAME_PATTERN.match(sym.name)
        if not match or match.group(1) not in self._symbols:
            return None
        head, slot_text, deriv_text = match.groups()
        indices = tuple(_parse_index(t) for t in slot_text.split(",") if t.strip())
        derivs = tuple(_parse_index(t) for t in (deriv_text or "").split(",") if t.strip())
        term = self.term(head, indices, derivs)
        self._by_name[sym.name] = term
        return term

    def is_invariant(self, sym: sympy.Basic) -> bool:
        return isinstance(sym, sympy.Symbol) and self.parse(sym) is not None

    def invariant_symbols(self, expr: sympy.Expr) -> List[sympy.Symbol]:
        """Invariant symbols of an expression, sorted by name."""
        return sorted(
            (s for s in expr.free_symbols if self.is_invariant(s)),
            key=lambda s: s.name
        )

    def derivative(self, sym: sympy.Symbol, index: Index) -> sympy.Expr:
        """Symbol of the covariant derivative of an instance along one index."""
        term = self.parse(sym)
        if term is None:
            return sympy.Integer(0)
        if term.order + 1 > self.truncation:
            raise TruncationError(term.head, term.order + 1, self.truncation)
        return self.expr(term.head, term.indices, term.derivs + (index,))
