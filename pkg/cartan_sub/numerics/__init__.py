"""Floating-point oracles backing the symbolic results."""
from cartan_sub.numerics.characteristics import (
    Grid2D,
    characteristics_solve,
    closure_residual,
    grid_report,
    pde_residual,
    solve_problem_file,
)
from cartan_sub.numerics.fixture import FrameField, RotatingFlow, rotating_flow_fixture
from cartan_sub.numerics.rigidity import (
    antisymmetric,
    antisymmetric_rigidity_search,
    rigidity_residual,
    sign_pattern_enumeration,
)

__all__ = [
    # PDE
    "Grid2D",
    "characteristics_solve",
    "closure_residual",
    "grid_report",
    "pde_residual",
    "solve_problem_file",
    # Rigidity
    "antisymmetric",
    "antisymmetric_rigidity_search",
    "rigidity_residual",
    "sign_pattern_enumeration",
    # Fixture
    "FrameField",
    "RotatingFlow",
    "rotating_flow_fixture",
]
