"""Indexed invariants, canonical forms and reduction."""
from .symbols import (
    ANTISYM_PAIR,
    NO_SYMMETRY,
    PAIR_ANTISYM,
    RIEMANN,
    SYM_PAIR,
    IndexClass,
    IndexedInvariant,
    InvariantSymbol,
    SymmetrySpec,
    Vocabulary,
    swap,
)
from .canonical import canonicalize, is_independent, seed_form
from .reduction import Reducer, monomial_terms, reduce_modulo

__all__ = [
    # Symbols
    "ANTISYM_PAIR",
    "NO_SYMMETRY",
    "PAIR_ANTISYM",
    "RIEMANN",
    "SYM_PAIR",
    "IndexClass",
    "IndexedInvariant",
    "InvariantSymbol",
    "SymmetrySpec",
    "Vocabulary",
    "swap",

    # Canonical forms
    "canonicalize",
    "is_independent",
    "seed_form",

    # Reduction
    "Reducer",
    "monomial_terms",
    "reduce_modulo",
]
