"""Signed orbit canonicalization and table independence."""
from typing import Any, Optional, Tuple
from cartan_sub.core.errors import IndexClassMismatchError, UndeclaredInvariantError
from cartan_sub.invariants.symbols import Index, IndexedInvariant


def index_sort_key(indices: Tuple[Index, ...]) -> Tuple:
    """Lexicographic key; integers sort before formal labels."""
    return tuple((0, i) if isinstance(i, int) else (1, str(i)) for i in indices)


def canonicalize(term: IndexedInvariant, vocabulary=None) -> Optional[IndexedInvariant]:
    """Orbit-minimal representative with accumulated sign, or None when zero.

    Args:
        term: Instance to canonicalize
        vocabulary: When given, the head must be declared there

    Returns:
        Canonical instance carrying the sign, None if the symmetry annihilates it
    """
    if vocabulary is not None and not vocabulary.has(term.head):
        raise UndeclaredInvariantError(term.head)
    for slot, (cls, index) in enumerate(zip(term.symbol.slots, term.indices)):
        if not cls.contains(index):
            raise IndexClassMismatchError(term.head, slot, index, cls.name)
    orbit = term.symbol.effective_symmetry.orbit(term.indices)
    if any(sign == 0 for sign in orbit.values()):
        return None
    best = min(orbit, key=index_sort_key)
    return IndexedInvariant(
        term.symbol,
        best,
        term.derivs,
        term.sign * orbit[best],
        term.deriv_slots,
    )


def seed_form(term: IndexedInvariant, table: Any) -> Optional[IndexedInvariant]:
    """Orbit element accepted by the table, smallest first; None if none is."""
    orbit = term.symbol.effective_symmetry.orbit(term.indices)
    if any(sign == 0 for sign in orbit.values()):
        return None
    for indices in sorted(orbit, key=index_sort_key):
        candidate = IndexedInvariant(
            term.symbol, indices, term.derivs, term.sign * orbit[indices], term.deriv_slots
        )
        if table.accepts(candidate):
            return candidate
    return None


def is_independent(term: IndexedInvariant, table: Any) -> bool:
    """Whether the instance, as written, satisfies its table row."""
    return bool(table.accepts(term))
