"""Algebraic relations among invariants: derivation, catalogs and diffs."""
from .relations import Relation, RelationSet
from .derive import (
    close_relations,
    coefficient_table,
    derive_identities,
    form_relations,
    verify_d_squared,
)
from .catalog import catalog, commutation_relations, covariant, has_catalog
from .compare import compare_with_catalog
from .weyl_flat import weyl_flatness_relations

__all__ = [
    # Relations
    "Relation",
    "RelationSet",

    # Derivation
    "close_relations",
    "coefficient_table",
    "derive_identities",
    "form_relations",
    "verify_d_squared",

    # Catalogs
    "catalog",
    "commutation_relations",
    "covariant",
    "has_catalog",
    "compare_with_catalog",
    "weyl_flatness_relations",
]
