"""Unit tests for the floating-point oracles."""
import numpy as np
import pytest
from cartan_sub.core.errors import InvalidParametersError
from cartan_sub.numerics import (
    Grid2D,
    antisymmetric,
    antisymmetric_rigidity_search,
    characteristics_solve,
    closure_residual,
    grid_report,
    pde_residual,
    rigidity_residual,
    rotating_flow_fixture,
    solve_problem_file,
)
from cartan_sub.numerics.fixture import RotatingFlow, quotient_curvature

pytestmark = pytest.mark.unit


def zero(x, y):
    return np.zeros_like(y)


def one(x, y):
    return np.ones_like(y)


# Characteristics

def test_zero_source_keeps_zero():
    """Test t = 0 initial data with no source stays zero."""
    grid = characteristics_solve(zero, zero, lambda y: np.zeros_like(y), step=1.0 / 16)

    assert not grid.failed.any()
    assert np.allclose(grid.values, 0.0)


def test_constant_source_solution(pde_problem):
    """Test a + b = 1 from t = 0 gives sin t = x."""
    grid, report = solve_problem_file(str(pde_problem))
    expected = np.arcsin(grid.x)[:, None] * np.ones((1, len(grid.y)))

    assert report.shape == [9, 17]
    assert report.failed_points == 0
    assert np.max(np.abs(grid.values - expected)) < 1e-6
    assert report.closure_residual < 1e-6
    assert report.max_residual < 1e-3
    assert report.reference_error < 1e-6


def test_generic_problem_converges():
    """Test the closure residual shrinks at order between 0.8 and 2.5."""
    grid, report = grid_report(
        lambda x, y: 0.5 * np.cos(y),
        lambda x, y: 0.25 * x,
        lambda y: 0.1 * np.sin(3 * y),
        step=1.0 / 32,
    )

    assert report.failed_points == 0
    assert report.convergence_order is not None
    assert 0.8 <= report.convergence_order <= 2.5
    assert pde_residual(grid, lambda x, y: 0.5 * np.cos(y), lambda x, y: 0.25 * x) < 1e-4


def test_characteristic_initial_line():
    """Test initial data with cos t <= 0 is refused."""
    with pytest.raises(InvalidParametersError):
        characteristics_solve(zero, zero, lambda y: np.full_like(y, 2.0), step=1.0 / 16)


def test_crossing_marks_failed_columns():
    """Test converging characteristics truncate the grid."""
    grid = characteristics_solve(zero, zero, lambda y: -1.2 * np.tanh(8 * (y - 0.5)), step=1.0 / 16)

    assert grid.failed.any()
    assert grid.failed[-1].all()
    assert not grid.failed[0].any()


def test_grid_step_validation():
    """Test grids need a positive step."""
    with pytest.raises(InvalidParametersError):
        Grid2D(np.zeros(1), np.zeros(1), 0.0, np.zeros((1, 1)))
    with pytest.raises(InvalidParametersError):
        characteristics_solve(zero, zero, lambda y: np.zeros_like(y), step=-1.0)


def test_closure_residual_of_exact_solution():
    """Test the cell Stokes check on the exact constant-source solution."""
    x = np.linspace(0.0, 0.5, 9)
    y = np.linspace(0.0, 1.0, 17)
    values = np.arcsin(x)[:, None] * np.ones((1, len(y)))
    grid = Grid2D(x, y, 1.0 / 16, values)

    assert closure_residual(grid, one, zero) < 1e-12


def test_grid_csv(tmp_path):
    """Test the CSV export writes one row per grid point."""
    grid = characteristics_solve(zero, zero, lambda y: np.zeros_like(y), step=0.25)
    path = grid.to_csv(str(tmp_path / "out" / "grid.csv"))
    lines = path.read_text().splitlines()

    assert lines[0] == "x,y,t"
    assert len(lines) == 1 + grid.values.size


# Rigidity

def test_antisymmetric_matrices():
    """Test upper-triangle entries fill an antisymmetric matrix."""
    matrix = antisymmetric(np.array([1.0, 2.0, 3.0]), 3)[0]

    assert np.allclose(matrix, -matrix.T)
    assert matrix[0, 1] == 1.0
    assert matrix[1, 2] == 3.0


def test_rigidity_residual_identity_rotation():
    """Test the residual vanishes only for equal row norms and magnitudes."""
    rotations = np.eye(2)[None]
    equal = antisymmetric(np.array([1.0]), 2) / np.sqrt(2.0)

    assert rigidity_residual(equal, rotations)[0] == pytest.approx(0.0)
    unequal = antisymmetric(np.array([1.0, 0.0, 0.0]), 3) / np.sqrt(2.0)
    assert rigidity_residual(unequal, np.eye(3)[None])[0] > 0


@pytest.mark.parametrize("p", [3, 4])
def test_rigidity_search_empty(p):
    """Test no nonzero antisymmetric witness exists for p = 3 and p = 4."""
    report = antisymmetric_rigidity_search(p, trials=200, seed=42, rotations=20, refine=3)

    assert report.empty
    assert report.best_residual > 1e-6
    assert report.enumeration_size == 3 ** (p * (p - 1) // 2) - 1
    assert report.enumeration_min_residual > 1e-6


def test_rigidity_search_deterministic():
    """Test the same seed reproduces the same report."""
    first = antisymmetric_rigidity_search(3, trials=100, seed=5, rotations=10, refine=2)
    second = antisymmetric_rigidity_search(3, trials=100, seed=5, rotations=10, refine=2)

    assert first.model_dump() == second.model_dump()


def test_rigidity_search_arguments():
    """Test p < 3 and empty searches are refused."""
    with pytest.raises(InvalidParametersError):
        antisymmetric_rigidity_search(2, trials=10)
    with pytest.raises(InvalidParametersError):
        antisymmetric_rigidity_search(3, trials=0)


# Rotating fixture

def test_static_congruence():
    """Test omega = 0 has no vorticity, acceleration or quotient curvature."""
    report = rotating_flow_fixture(0.0, radii=[1.0], seed=1)

    for sample in report.samples:
        assert np.allclose(sample["M"], 0.0, atol=1e-10)
        assert np.allclose(sample["K"], 0.0, atol=1e-10)
        assert all(abs(v) < 1e-10 for v in sample["S"].values())


def test_rotating_fixture_pattern():
    """Test S_1212 > 0 and off-pattern components shrink like h^2."""
    report = rotating_flow_fixture(0.1, radii=[0.5, 2.0], seed=42)

    assert report.s1212_min > 0
    assert report.off_pattern_max < 1e-3
    assert report.convergence_ratio is not None
    assert 3.0 <= report.convergence_ratio <= 5.5
    for sample in report.samples:
        m12 = sample["M"][0][1]
        assert sample["S"]["1212"] == pytest.approx(3 * m12 ** 2, rel=1e-3)


def test_light_cylinder():
    """Test samples at |omega| r >= 1 are refused."""
    with pytest.raises(InvalidParametersError):
        rotating_flow_fixture(0.6, radii=[0.5, 2.0])
    with pytest.raises(InvalidParametersError):
        rotating_flow_fixture(0.1, radii=[0.0, 1.0])


def test_frames_orthonormal():
    """Test the adapted frame is orthonormal in the lab coordinates."""
    flow = RotatingFlow(0.3, seed=7)
    field = flow.frame_field(np.array([[1.0, 0.5, 0.2, 0.0], [0.3, -0.8, 1.0, 2.0]]))

    assert field.orthonormality_error() < 1e-10


def test_quotient_curvature_single_plane():
    """Test vorticity in one plane curves only that plane."""
    vorticity = np.zeros((4, 4))
    vorticity[1, 2], vorticity[2, 1] = 0.5, -0.5
    values = quotient_curvature(vorticity)

    assert values["1212"] == pytest.approx(0.75)
    assert all(v == 0 for key, v in values.items() if key != "1212")
