"""Reduction of a shear-free flow to a Weyl structure on the space of flow lines."""
import logging
from dataclasses import dataclass, field
from typing import Dict, List
import sympy
from sympy import Expr
from cartan_sub.core.errors import InvalidParametersError
from cartan_sub.forms.algebra import FormExpr, VectorField, horizontal_part, vertical_part
from cartan_sub.forms.exterior import lie_derivative
from cartan_sub.forms.symmetric import SymmetricProduct, lie_derivative_symmetric
from cartan_sub.geometries.builtins import shear_free_flow
from cartan_sub.geometries.system import GeometrySystem
from cartan_sub.utils.linalg import eliminate

logger = logging.getLogger(__name__)

scale_potential = sympy.Symbol("Lambda")


@dataclass
class ShearFreeReduction:
    """Checks of the reduction along V = I_0 + M_ij I_ij."""

    p: int
    lift: Dict[str, str] = field(default_factory=dict)
    lift_ok: bool = False
    metric_ok: bool = False
    theta_ok: bool = False
    vertical_ok: bool = False
    absorbable: bool = False
    residuals: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.lift_ok and self.metric_ok and self.theta_ok and self.vertical_ok

    def to_dict(self) -> Dict[str, object]:
        return {
            "p": self.p,
            "lift": self.lift,
            "lift_ok": self.lift_ok,
            "metric_ok": self.metric_ok,
            "theta_ok": self.theta_ok,
            "vertical_ok": self.vertical_ok,
            "absorbable": self.absorbable,
            "residuals": self.residuals,
        }


def _coefficients(form: FormExpr) -> List[Expr]:
    ordered = sorted(form.items(), key=lambda t: [g.position for g in t[0]])
    return [sympy.expand(c) for _, c in ordered]


def _rotation_pairs(geom: GeometrySystem):
    base = geom.vocabulary.classes["i"]
    return [(i, j) for i in base.values() for j in base.values() if i < j]


def solve_lift(geom: GeometrySystem) -> Dict[sympy.Symbol, Expr]:
    """Rotation components X_ij of V = I_0 + X_ij I_ij with L_V omega_i = E omega_i."""
    t = geom.vocabulary.classes["0"].maximum
    unknowns = {(i, j): sympy.Symbol(f"X[{i},{j}]") for i, j in _rotation_pairs(geom)}
    components = {geom.frame[t]: sympy.Integer(1)}
    components.update({geom.coframe.get("omega", i, j): x for (i, j), x in unknowns.items()})
    vector = VectorField(components)
    equations: List[Expr] = []
    for i in geom.vocabulary.classes["i"].values():
        omega_i = geom.frame_form(i)
        residual = lie_derivative(vector, omega_i, geom) - omega_i * geom.inv("E")
        equations.extend(_coefficients(residual))
    elimination = eliminate(equations, list(unknowns.values()))
    if any(sympy.expand(c) != 0 for c in elimination.conditions):
        logger.error(f"No rotation lift makes the flow conformal on {geom.label}")
        raise InvalidParametersError(geom.label, "shear-free lift does not exist")
    return dict(elimination.solution)


def flow_vector(geom: GeometrySystem) -> VectorField:
    """V = I_0 + M_ij I_ij."""
    t = geom.vocabulary.classes["0"].maximum
    components = {geom.frame[t]: sympy.Integer(1)}
    for i, j in _rotation_pairs(geom):
        components[geom.coframe.get("omega", i, j)] = geom.inv("M", i, j)
    return VectorField(components)


def reduced_rotation(geom: GeometrySystem, i: int, j: int) -> FormExpr:
    """pi_ij = omega_ij - M_ij omega_0."""
    t = geom.vocabulary.classes["0"].maximum
    return geom.form("omega", i, j) - geom.frame_form(t) * geom.inv("M", i, j)


def absorbed_torsion(geom: GeometrySystem, residuals: Dict[tuple, FormExpr]) -> bool:
    """Whether sum C_ijk omega_k has the shape delta_jk X_i - delta_ik X_j."""
    base = list(geom.vocabulary.classes["i"].values())
    shift = {i: sympy.Symbol(f"Y[{i}]") for i in base}
    equations: List[Expr] = []
    for (i, j), form in residuals.items():
        target = geom.frame_form(j) * shift[i] - geom.frame_form(i) * shift[j]
        equations.extend(_coefficients(form - target))
    elimination = eliminate(equations, list(shift.values()))
    return all(sympy.expand(c) == 0 for c in elimination.conditions)


def shear_free_reduction(p: int, truncation: int = 1) -> ShearFreeReduction:
    """
    Check that a shear-free flow induces a conformal structure on its flow lines.

    On ShearFreeFlow(p+1): the lift V = I_0 + M_ij I_ij solves L_V omega_i =
    E omega_i, the flow scales the spatial metric as L_V sum omega_i^2 =
    2 E sum omega_i^2, theta_i = exp(-Lambda) omega_i with
    d Lambda = E omega_0 + Lambda_i omega_i is invariant, and the vertical
    part of L_V pi_ij cancels. Whether the horizontal rest of L_V pi_ij is
    absorbed by a change of Weyl connection is reported, not required.

    Args:
        p: Dimension of the space of flow lines (at least 2)
        truncation: Derivative order kept on the invariants
    """
    if p < 2:
        raise InvalidParametersError("shear-free-reduction", "p must be at least 2")
    geom = shear_free_flow(p + 1, truncation)
    base = list(geom.vocabulary.classes["i"].values())
    t = geom.vocabulary.classes["0"].maximum
    e = geom.inv("E")
    result = ShearFreeReduction(p=p)
    logger.info(f"Shear-free reduction on {geom.label}")

    lift = solve_lift(geom)
    result.lift = {str(k): str(v) for k, v in lift.items()}
    result.lift_ok = all(
        sympy.expand(lift.get(sympy.Symbol(f"X[{i},{j}]"), 0) - geom.inv("M", i, j)) == 0
        for i, j in _rotation_pairs(geom)
    )

    vector = flow_vector(geom)
    metric = SymmetricProduct.square_sum([geom.frame[i] for i in base])
    metric_rate = lie_derivative_symmetric(vector, metric, geom) - metric * (2 * e)
    result.metric_ok = metric_rate.is_zero()
    if not result.metric_ok:
        result.residuals.append(f"L_V g - 2E g = {metric_rate}")

    gradient = geom.frame_form(t) * e
    for i in base:
        gradient = gradient + geom.frame_form(i) * sympy.Symbol(f"Lambda[{i}]")
    geom.declare_scalar(scale_potential, gradient)
    result.theta_ok = True
    for i in base:
        theta = geom.frame_form(i) * sympy.exp(-scale_potential)
        rate = lie_derivative(vector, theta, geom).map_coefficients(sympy.simplify)
        if not rate.is_zero():
            result.theta_ok = False
            result.residuals.append(f"L_V theta_{i} = {rate}")

    horizontal: Dict[tuple, FormExpr] = {}
    result.vertical_ok = True
    for i, j in _rotation_pairs(geom):
        rate = lie_derivative(vector, reduced_rotation(geom, i, j), geom)
        vertical = vertical_part(rate)
        if not vertical.is_zero():
            result.vertical_ok = False
            result.residuals.append(f"vertical part of L_V pi_{i}{j} = {vertical}")
        horizontal[(i, j)] = horizontal_part(rate)
    result.absorbable = absorbed_torsion(geom, horizontal)

    logger.info(
        f"Shear-free reduction p={p}: lift {result.lift_ok}, metric {result.metric_ok}, "
        f"theta {result.theta_ok}, vertical {result.vertical_ok}, absorbable {result.absorbable}"
    )
    return result
