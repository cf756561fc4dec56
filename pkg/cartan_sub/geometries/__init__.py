"""Structural-equation systems, bundle reduction and dependent forms."""
from .system import GeometrySystem
from .builtins import BUILTINS, builtin, parameter_names, resolve_name
from .stabilizer import (
    MatrixLieAlgebra,
    general_linear_algebra,
    orthogonal_algebra,
    projective_isotropy_algebra,
    stabilizer_reduction,
)
from .dependent import (
    Decomposition,
    DependentAnsatz,
    dependent_form_solve,
    riemannian_decomposition,
    weyl_codim1_decomposition,
)
from .loader import (
    build_geometry,
    definition_schema,
    geometry_from_config,
    load_definition,
    load_geometry,
    validate_against_builtin,
)

__all__ = [
    # Systems
    "GeometrySystem",
    "BUILTINS",
    "builtin",
    "parameter_names",
    "resolve_name",

    # Bundle reduction
    "MatrixLieAlgebra",
    "general_linear_algebra",
    "orthogonal_algebra",
    "projective_isotropy_algebra",
    "stabilizer_reduction",

    # Dependent forms
    "Decomposition",
    "DependentAnsatz",
    "dependent_form_solve",
    "riemannian_decomposition",
    "weyl_codim1_decomposition",

    # Definition files
    "build_geometry",
    "definition_schema",
    "geometry_from_config",
    "load_definition",
    "load_geometry",
    "validate_against_builtin",
]
