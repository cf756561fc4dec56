"""
Method of characteristics for sin t * t_y + cos t * t_x = a + b.

This is the two-dimensional existence problem of a Riemannian submersion
with one-dimensional base and fibre: once the angle t is known, the forms
cos t theta_0 + sin t theta_1 close up. Initial data is given on the line
x = x_min; characteristics are marched column by column in x.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Tuple
import numpy as np
import sympy
from scipy.interpolate import CubicSpline
from cartan_sub.core.errors import InvalidParametersError
from cartan_sub.models.responses import GridReport

logger = logging.getLogger(__name__)

Source = Callable[[np.ndarray, np.ndarray], np.ndarray]

REFERENCE_REFINEMENT = 8
SUBSTEPS = 4


@dataclass
class Grid2D:
    """
    Angle t(x, y) on a rectangular grid.

    Attributes:
        x: Column coordinates
        y: Row coordinates
        step: Grid step h
        values: Array (len(x), len(y)); NaN where no characteristic reached
        failed: Mask of points inside a crossing region or left uncovered
    """

    x: np.ndarray
    y: np.ndarray
    step: float
    values: np.ndarray
    failed: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.step <= 0:
            raise InvalidParametersError("Grid2D", "step must be positive")
        if self.failed is None:
            self.failed = np.isnan(self.values)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def to_csv(self, path: str) -> Path:
        """Write x, y, t rows; failed points are written as nan."""
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        xx, yy = np.meshgrid(self.x, self.y, indexing="ij")
        table = np.column_stack([xx.ravel(), yy.ravel(), self.values.ravel()])
        np.savetxt(target, table, delimiter=",", header="x,y,t", comments="", fmt="%.12g")
        return target


def _axis(low: float, high: float, step: float) -> np.ndarray:
    count = int(round((high - low) / step))
    return low + step * np.arange(count + 1)


def _rk4(
    source: Source,
    x: float,
    y: np.ndarray,
    t: np.ndarray,
    dx: float
) -> Tuple[np.ndarray, np.ndarray]:
    """One RK4 step of dy/dx = tan t, dt/dx = f / cos t."""
    def rhs(xv, yv, tv):
        c = np.cos(tv)
        return np.tan(tv), source(np.full_like(yv, xv), yv) / c

    k1 = rhs(x, y, t)
    k2 = rhs(x + dx / 2, y + dx / 2 * k1[0], t + dx / 2 * k1[1])
    k3 = rhs(x + dx / 2, y + dx / 2 * k2[0], t + dx / 2 * k2[1])
    k4 = rhs(x + dx, y + dx * k3[0], t + dx * k3[1])
    y_next = y + dx / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
    t_next = t + dx / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    return y_next, t_next


def characteristics_solve(
    a: Source,
    b: Source,
    initial: Callable[[np.ndarray], np.ndarray],
    x_range: Tuple[float, float] = (0.0, 0.5),
    y_range: Tuple[float, float] = (0.0, 1.0),
    step: float = 1.0 / 256,
    margin: float = 0.5
) -> Grid2D:
    """
    Integrate sin t * t_y + cos t * t_x = a + b from t(x_min, y) = initial(y).

    Characteristics dy/dx = tan t, dt/dx = (a + b)/cos t start on the line
    x = x_min, seeded at spacing step/2 over the y range widened by
    `margin`. Each column is reached with RK4 sub-steps of at most step/4
    and filled by cubic interpolation in y across the characteristics.

    Args:
        a, b: Vectorized source terms a(x, y), b(x, y)
        initial: Initial angle on x = x_min, vectorized in y
        x_range, y_range: Domain
        step: Grid step h
        margin: Relative widening of the seeded y range

    Returns:
        Grid2D; a crossing of characteristics or a characteristic turning
        back (cos t <= 0) marks that column and all later ones as failed
    """
    if step <= 0:
        raise InvalidParametersError("pde2d", "step must be positive")
    x = _axis(*x_range, step)
    y = _axis(*y_range, step)
    span = y_range[1] - y_range[0]
    seeds = np.arange(y_range[0] - margin * span, y_range[1] + margin * span + step / 4, step / 2)

    def source(xv, yv):
        return np.broadcast_to(a(xv, yv) + b(xv, yv), yv.shape).astype(float)

    ys = seeds.astype(float)
    ts = np.asarray(initial(ys), dtype=float) * np.ones_like(ys)
    if np.any(np.cos(ts) <= 0):
        raise InvalidParametersError("pde2d", "initial line is characteristic where cos t <= 0")

    values = np.full((len(x), len(y)), np.nan)
    failed = np.zeros(values.shape, dtype=bool)
    logger.info(f"Characteristics: {len(seeds)} curves, grid {values.shape}, h={step:g}")
    for column, xk in enumerate(x):
        if column > 0:
            dx = (xk - x[column - 1]) / SUBSTEPS
            for sub in range(SUBSTEPS):
                ys, ts = _rk4(source, x[column - 1] + sub * dx, ys, ts, dx)
        if np.any(np.cos(ts) <= 0) or np.any(np.diff(ys) <= 0) or not np.all(np.isfinite(ys)):
            logger.warning(f"Characteristics cross or turn back at x={xk:.6g}; grid truncated")
            failed[column:] = True
            break
        spline = CubicSpline(ys, ts)
        inside = (y >= ys[0]) & (y <= ys[-1])
        values[column, inside] = spline(y[inside])
        failed[column, ~inside] = True
    grid = Grid2D(x, y, step, values, failed)
    logger.debug(f"Characteristics: {int(failed.sum())} failed grid points")
    return grid


def _central_difference(values: np.ndarray, step: float, axis: int) -> np.ndarray:
    """Fourth-order central difference; two border layers are NaN."""
    out = np.full(values.shape, np.nan)
    v = np.moveaxis(values, axis, 0)
    o = np.moveaxis(out, axis, 0)
    o[2:-2] = (-v[4:] + 8 * v[3:-1] - 8 * v[1:-3] + v[:-4]) / (12 * step)
    return out


def pde_residual(grid: Grid2D, a: Source, b: Source) -> float:
    """Max |sin t t_y + cos t t_x - a - b| over interior grid points."""
    t = grid.values
    tx = _central_difference(t, grid.step, 0)
    ty = _central_difference(t, grid.step, 1)
    xx, yy = np.meshgrid(grid.x, grid.y, indexing="ij")
    residual = np.sin(t) * ty + np.cos(t) * tx - (a(xx, yy) + b(xx, yy))
    residual = residual[np.isfinite(residual)]
    return float(np.max(np.abs(residual))) if residual.size else float("nan")


def closure_residual(grid: Grid2D, a: Source, b: Source) -> float:
    """
    Cell-wise Stokes check of d(cos t theta_0 + sin t theta_1) = (a + b) theta_0 ^ theta_1.

    Circulation around each grid cell (trapezoid rule on the edges) minus the
    source integrated over the cell, divided by the cell area.
    """
    h = grid.step
    c, s = np.cos(grid.values), np.sin(grid.values)
    xx, yy = np.meshgrid(grid.x, grid.y, indexing="ij")
    f = a(xx, yy) + b(xx, yy)
    f = np.broadcast_to(f, grid.values.shape)
    circulation = (
        h / 2 * (c[:-1, :-1] + c[1:, :-1])
        + h / 2 * (s[1:, :-1] + s[1:, 1:])
        - h / 2 * (c[:-1, 1:] + c[1:, 1:])
        - h / 2 * (s[:-1, :-1] + s[:-1, 1:])
    )
    area = h * h / 4 * (f[:-1, :-1] + f[1:, :-1] + f[:-1, 1:] + f[1:, 1:])
    residual = (circulation - area) / (h * h)
    residual = residual[np.isfinite(residual)]
    return float(np.max(np.abs(residual))) if residual.size else float("nan")


def grid_report(
    a: Source,
    b: Source,
    initial: Callable[[np.ndarray], np.ndarray],
    x_range: Tuple[float, float] = (0.0, 0.5),
    y_range: Tuple[float, float] = (0.0, 1.0),
    step: float = 1.0 / 256
) -> Tuple[Grid2D, GridReport]:
    """
    Solve at h, h/2 and the reference h/8 and summarize.

    The convergence order is measured on the cell closure residual between
    h and h/2; the reference error compares the h grid with the h/8 solution
    on the shared points.
    """
    grid = characteristics_solve(a, b, initial, x_range, y_range, step)
    half = characteristics_solve(a, b, initial, x_range, y_range, step / 2)
    reference = characteristics_solve(a, b, initial, x_range, y_range, step / REFERENCE_REFINEMENT)

    coarse = closure_residual(grid, a, b)
    fine = closure_residual(half, a, b)
    order = None
    if np.isfinite(coarse) and np.isfinite(fine) and fine > 0 and coarse > 0:
        order = float(np.log2(coarse / fine))

    sub = reference.values[::REFERENCE_REFINEMENT, ::REFERENCE_REFINEMENT]
    difference = np.abs(grid.values - sub[:grid.shape[0], :grid.shape[1]])
    difference = difference[np.isfinite(difference)]
    reference_error = float(difference.max()) if difference.size else None

    report = GridReport(
        step=step,
        shape=list(grid.shape),
        max_residual=pde_residual(grid, a, b),
        closure_residual=coarse,
        convergence_order=order,
        reference_error=reference_error,
        failed_points=int(grid.failed.sum()),
    )
    logger.info(
        f"pde2d h={step:g}: residual {report.max_residual:.3e}, "
        f"closure {coarse:.3e}, order {order}"
    )
    return grid, report


def load_problem(path: str) -> Dict[str, object]:
    """
    Read a pde2d problem file.

    The file holds sympy expressions in x and y for "a", "b" and "initial"
    (the latter in y only), plus optional "x", "y" ranges and "step".
    """
    with open(path, "r", encoding="utf-8") as handle:
        spec = json.load(handle)
    x, y = sympy.symbols("x y")
    problem: Dict[str, object] = {}
    for key in ("a", "b"):
        expr = sympy.sympify(spec.get(key, "0"))
        problem[key] = _vectorize(sympy.lambdify((x, y), expr, "numpy"))
    initial = sympy.sympify(spec.get("initial", "0"))
    problem["initial"] = _vectorize_1d(sympy.lambdify(y, initial, "numpy"))
    problem["x_range"] = tuple(spec.get("x", (0.0, 0.5)))
    problem["y_range"] = tuple(spec.get("y", (0.0, 1.0)))
    problem["step"] = float(spec.get("step", 1.0 / 256))
    return problem


def _vectorize(fn: Callable) -> Source:
    return lambda xv, yv: np.broadcast_to(np.asarray(fn(xv, yv), dtype=float), np.shape(yv))


def _vectorize_1d(fn: Callable) -> Callable[[np.ndarray], np.ndarray]:
    return lambda yv: np.broadcast_to(np.asarray(fn(yv), dtype=float), np.shape(yv))


def solve_problem_file(path: str) -> Tuple[Grid2D, GridReport]:
    problem = load_problem(path)
    return grid_report(**problem)
