"""Exterior algebra over coframes."""
from .algebra import (
    HORIZONTAL,
    VERTICAL,
    SCALE,
    Coframe,
    CoframeGenerator,
    FormExpr,
    VectorField,
    extract_coefficients,
    horizontal_part,
    interior,
    vertical_part,
    wedge,
    wedge_all,
)
from .exterior import (
    apply_derivation,
    d_function,
    d_invariant,
    d_squared,
    exterior_d,
    lie_derivative,
    lie_derivative_function,
    structure_check,
)
from .symmetric import SymmetricProduct, lie_derivative_symmetric

__all__ = [
    # Algebra
    "HORIZONTAL",
    "VERTICAL",
    "SCALE",
    "Coframe",
    "CoframeGenerator",
    "FormExpr",
    "VectorField",
    "extract_coefficients",
    "horizontal_part",
    "interior",
    "vertical_part",
    "wedge",
    "wedge_all",

    # Derivatives
    "apply_derivation",
    "d_function",
    "d_invariant",
    "d_squared",
    "exterior_d",
    "lie_derivative",
    "lie_derivative_function",
    "structure_check",

    # Symmetric products
    "SymmetricProduct",
    "lie_derivative_symmetric",
]
