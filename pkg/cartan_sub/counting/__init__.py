"""Involutive seeds, Cartan characters and degree-of-freedom counts."""
from .tables import (
    FixedContribution,
    SeedRow,
    SeedTable,
    TABLES,
    einstein_character,
    seed_table,
)
from .characters import (
    CharacterVector,
    SeedInstance,
    cartan_characters,
    character_report,
    enumerate_seeds,
    seeds_by_row,
)
from .closed_forms import CONFORMAL_2D, FORMS, dof_closed_forms, symbolic
from .constraints import CONSTRAINTS, apply_constraints, row_filter

__all__ = [
    # Tables
    "FixedContribution",
    "SeedRow",
    "SeedTable",
    "TABLES",
    "einstein_character",
    "seed_table",

    # Characters
    "CharacterVector",
    "SeedInstance",
    "cartan_characters",
    "character_report",
    "enumerate_seeds",
    "seeds_by_row",

    # Closed forms
    "CONFORMAL_2D",
    "FORMS",
    "dof_closed_forms",
    "symbolic",

    # Constraints
    "CONSTRAINTS",
    "apply_constraints",
    "row_filter",
]
