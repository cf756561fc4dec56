"""Partial results on shear-free perfect fluids: irrotational and geodesic flows."""
import logging
from typing import Dict, Iterable, List, Optional
import sympy
from sympy import Expr
from cartan_sub.config import settings
from cartan_sub.core.errors import InvalidParametersError
from cartan_sub.geometries.system import GeometrySystem
from cartan_sub.identities.weyl_flat import (
    EXPANSION_NONZERO,
    declare_time_scaling,
    weyl_flatness_relations,
)
from cartan_sub.models.responses import FAILED, PASS, CertificateBranch, CertificateModel
from cartan_sub.numerics.rigidity import antisymmetric_rigidity_search
from cartan_sub.scenarios.certificate import branch_status, finish, linear_system
from cartan_sub.scenarios.dictionary import fluid_lines
from cartan_sub.scenarios.fibre import fibre_derivative, sample_coefficients, time_index

logger = logging.getLogger(__name__)

ASSUME_K_ZERO = "K=0"
ASSUME_E0_ZERO = "E0=0"
ASSUMPTIONS = (ASSUME_K_ZERO, ASSUME_E0_ZERO)

delta = sympy.Symbol("delta")


def zero_heads(expr: Expr, geom: GeometrySystem, heads: Iterable[str]) -> Expr:
    """Set every invariant with one of the heads (derivatives included) to zero."""
    heads = set(heads)
    vocabulary = geom.vocabulary
    zero = {
        s: 0 for s in expr.free_symbols
        if vocabulary.is_invariant(s) and vocabulary.parse(s).head in heads
    }
    return sympy.expand(expr.xreplace(zero))


def _check_assumption(assume: Optional[str]) -> None:
    if assume is not None and assume not in ASSUMPTIONS:
        logger.error(f"Unknown assumption '{assume}'")
        raise InvalidParametersError("ellis", f"assume must be one of {', '.join(ASSUMPTIONS)}")


def ellis_irrotational(p: int, assume: Optional[str] = None) -> CertificateModel:
    """
    An irrotational shear-free perfect fluid has E0 = 0 or K = 0.

    With M = 0 the momentum constraint reduces to p E0 K_j = 0.

    Args:
        p: Base dimension
        assume: Optional extra hypothesis "K=0" or "E0=0"

    Returns:
        Certificate; the system over the products E0*K[j] forces each to zero
    """
    if p < 1:
        raise InvalidParametersError("ellis-irrotational", "p must be at least 1")
    _check_assumption(assume)
    logger.info(f"Ellis, irrotational case, p={p}")
    geom, lines = fluid_lines(p)
    e0 = geom.inv("E0")
    base = list(geom.vocabulary.classes["i"].values())
    killed = ["M"] + ([assume.split("=")[0]] if assume else [])
    equations = [zero_heads(lines[f"momentum[{j}]"], geom, killed) for j in base]
    unknowns = [e0 * geom.inv("K", j) for j in base]
    system = linear_system("momentum constraint with M = 0", equations, unknowns)

    hypotheses = ["shear-free perfect fluid", "M = 0"] + ([assume] if assume else [])
    if assume:
        status = PASS if all(e == 0 for e in equations) else FAILED
        branch = CertificateBranch(
            label=assume,
            hypotheses=hypotheses,
            systems=[system],
            relations=["momentum constraint holds identically"],
            conclusion="identity",
            status=status,
        )
    else:
        status = branch_status([system], [system])
        branch = CertificateBranch(
            label="M=0",
            hypotheses=hypotheses,
            systems=[system],
            relations=[f"{e} = 0" for e in equations],
            conclusion="E0 = 0 or K = 0" if status == PASS else "momentum constraint not reduced",
            status=status,
        )
    certificate = CertificateModel(
        scenario="ellis-irrotational",
        dims={"p": p},
        hypotheses=hypotheses,
        branches=[branch],
        conclusion="either the expansion or the acceleration vanishes",
    )
    return finish(certificate)


def _symbol_map(geom: GeometrySystem, values: Dict[sympy.Symbol, Expr]) -> Dict[sympy.Symbol, Expr]:
    """Flow derivatives of symbols -> prescribed values, sign-corrected."""
    t = time_index(geom)
    mapping = {}
    for sym, value in values.items():
        derivative = geom.vocabulary.derivative(sym, t)
        if derivative == 0:
            continue
        target = next(iter(derivative.free_symbols))
        mapping[target] = sympy.expand(value * target / derivative)
    return mapping


def _scaling_branch(p: int, seed: int) -> CertificateBranch:
    relations = weyl_flatness_relations(p, EXPANSION_NONZERO)
    geom = relations.geometry
    lam = declare_time_scaling(geom)
    substitution = {lam: delta + geom.inv("E0")}
    exprs = []
    for relation in relations:
        if relation.provenance != "acceleration curl":
            continue
        expr = zero_heads(relation.expr.xreplace(substitution), geom, ["K"])
        if expr != 0:
            exprs.append(expr)
    system = linear_system(
        "acceleration curl with K = 0, lambda0 = E0 + delta",
        sample_coefficients(exprs, [delta], seed),
        [delta],
    )
    status = branch_status([system], [system])
    return CertificateBranch(
        label="lambda0 = E0",
        hypotheses=["K = 0", "M != 0", "E0 != 0", "scale curvature of the total space vanishes"],
        systems=[system],
        relations=["lambda0 - E0 = 0"] if status == PASS else [],
        conclusion="the flow vector scales at the expansion rate",
        status=status,
    )


def pressure_rate_expected(geom: GeometrySystem, p: int, i: int) -> Expr:
    """4 E0 M_ij M_ij - 2 E0 M_jk M_jk + p(p-2) E0^3."""
    inv = geom.inv
    base = list(geom.vocabulary.classes["i"].values())
    e0 = inv("E0")
    row = sum(inv("M", i, j) ** 2 for j in base)
    total = sum(inv("M", j, k) ** 2 for j in base for k in base)
    return sympy.expand(4 * e0 * row - 2 * e0 * total + p * (p - 2) * e0 ** 3)


def _pressure_branch(p: int) -> CertificateBranch:
    geom, lines = fluid_lines(p)
    inv = geom.inv
    base = list(geom.vocabulary.classes["i"].values())
    e0 = inv("E0")
    flow_values: Dict[sympy.Symbol, Expr] = {e0: e0 ** 2}
    for i in base:
        for j in base:
            if i < j:
                m = inv("M", i, j)
                flow_values[next(iter(m.free_symbols))] = -e0 * next(iter(m.free_symbols))
    mapping = _symbol_map(geom, flow_values)

    relations: List[str] = []
    mismatches = []
    rates = {}
    for i in base:
        pressure = zero_heads(lines[f"pressure[{i}]"], geom, ["K"])
        rate = sympy.expand(fibre_derivative(pressure, geom, {"S"}).xreplace(mapping))
        rates[i] = rate
        if sympy.expand(rate - pressure_rate_expected(geom, p, i)) != 0:
            mismatches.append(i)
    first = base[0]
    relations.append(f"P;0 = {rates[first]}")
    for i in base[1:]:
        difference = sympy.expand((rates[i] - rates[first]) / (4 * e0))
        relations.append(f"{difference} = 0")
    status = PASS if not mismatches else FAILED
    if mismatches:
        logger.error(f"Pressure rate differs from the expected form for i in {mismatches}")
    return CertificateBranch(
        label="pressure",
        hypotheses=["S_ijkl;0 = 0", "M_ij;0 = -E0 M_ij", "E0;0 = E0^2"],
        relations=relations,
        conclusion="the row sums M_ij M_ij do not depend on i, in every rotated frame",
        status=status,
    )


def ellis_geodesic(
    n: int,
    assume: Optional[str] = None,
    trials: Optional[int] = None,
    seed: Optional[int] = None
) -> CertificateModel:
    """
    A geodesic shear-free perfect fluid has M = 0 or E0 = 0.

    Args:
        n: Total dimension (at least 4)
        assume: "E0=0" short-circuits to the rigid case
        trials: Rigidity search restarts
        seed: Seed for sampling and the search

    Returns:
        Certificate with the scaling, pressure and rigidity branches; a
        witness from the search makes it FAILED
    """
    if n < 4:
        raise InvalidParametersError("ellis-geodesic", "n must be at least 4")
    _check_assumption(assume)
    seed = settings.seed if seed is None else seed
    p = n - 1
    logger.info(f"Ellis, geodesic case, n={n}")
    hypotheses = ["shear-free perfect fluid", "K = 0"]

    if assume == ASSUME_E0_ZERO:
        certificate = CertificateModel(
            scenario="ellis-geodesic",
            dims={"n": n},
            hypotheses=hypotheses + [assume],
            branches=[CertificateBranch(
                label=assume,
                hypotheses=[assume],
                conclusion="expansion-free: the flow is Born rigid",
            )],
            conclusion="M = 0 or E0 = 0",
        )
        return finish(certificate)

    report = antisymmetric_rigidity_search(p, trials, seed)
    rigidity = CertificateBranch(
        label="rigidity",
        hypotheses=[
            "M antisymmetric and nonzero",
            "equal row norms and magnitudes under rotations",
        ],
        relations=[f"best residual {report.best_residual:.3e}"],
        conclusion="no nonzero M satisfies the constraints" if report.empty else "witness found",
        status=PASS if report.empty else FAILED,
    )
    notes = [f"rigidity search: {report.trials} trials, seed {report.seed}"]
    if report.enumeration_min_residual is not None:
        notes.append(
            f"sign-pattern enumeration: {report.enumeration_size} patterns, "
            f"minimum residual {report.enumeration_min_residual:.3e}"
        )
    certificate = CertificateModel(
        scenario="ellis-geodesic",
        dims={"n": n},
        hypotheses=hypotheses + ["M != 0", "E0 != 0"],
        branches=[_scaling_branch(p, seed), _pressure_branch(p), rigidity],
        conclusion="contradiction: M = 0 or E0 = 0",
        witness=report.witness,
        notes=notes,
    )
    return finish(certificate)
