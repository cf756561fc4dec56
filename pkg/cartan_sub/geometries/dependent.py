"""Solve for the dependent connection forms of a structure-preserving submersion.

The total-space coframe is pulled back to the reduced coframe through an
ansatz with unknown coefficients; equating d of the matched horizontal forms
gives a linear system in those unknowns.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple
import sympy
from sympy import Expr
from cartan_sub.core.errors import InvalidParametersError
from cartan_sub.forms.algebra import FormExpr, wedge_all
from cartan_sub.geometries.builtins import (
    riemannian,
    riemannian_submersion,
    weyl,
    weyl_submersion_codim1,
)
from cartan_sub.geometries.system import GeometrySystem
from cartan_sub.utils.linalg import Elimination, eliminate

logger = logging.getLogger(__name__)


@dataclass
class DependentAnsatz:
    """Pullback of the total coframe to the reduced one.

    Attributes:
        name: Label for reports
        images: Total generator name -> form over the reduced coframe
        unknowns: Coefficient symbols in elimination order (pivots come first)
        matches: (total generator, reduced generator) pairs whose d must agree
        dependent: Total generators solved for, in report order
    """

    name: str
    images: Dict[str, FormExpr]
    unknowns: List[sympy.Symbol]
    matches: List[Tuple[str, str]]
    dependent: List[str] = field(default_factory=list)


@dataclass
class Decomposition:
    """Solved dependent forms and the constraints on the ansatz coefficients."""

    name: str
    forms: Dict[str, FormExpr] = field(default_factory=dict)
    solution: Dict[sympy.Symbol, Expr] = field(default_factory=dict)
    zero: List[sympy.Symbol] = field(default_factory=list)
    free: List[sympy.Symbol] = field(default_factory=list)
    incompatible: List[Expr] = field(default_factory=list)
    verified: bool = True

    @property
    def constraints(self) -> List[Expr]:
        """Nonzero solved relations u - value = 0."""
        return [u - v for u, v in self.solution.items() if v != 0]

    def zero_families(self) -> List[str]:
        """Unknown families whose every member vanishes."""
        families: Dict[str, bool] = {}
        for u in list(self.solution) + self.free:
            family = u.name.split("[")[0]
            vanishes = u in self.solution and self.solution[u] == 0
            families[family] = families.get(family, True) and vanishes
        return sorted(f for f, v in families.items() if v)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "forms": {k: str(v) for k, v in self.forms.items()},
            "zero_families": self.zero_families(),
            "constraints": [f"{u} = {v}" for u, v in self.solution.items() if v != 0],
            "free": [str(u) for u in self.free],
            "incompatible": [str(c) for c in self.incompatible],
            "verified": self.verified,
        }


def _unknown(family: str, *indices: int) -> sympy.Symbol:
    return sympy.Symbol(f"{family}[{','.join(str(i) for i in indices)}]")


def pullback(form: FormExpr, images: Dict[str, FormExpr]) -> FormExpr:
    """Substitute each generator of a form by its image."""
    result = FormExpr()
    for wedge_term, coeff in form.items():
        try:
            factors = [images[g.name] for g in wedge_term]
        except KeyError as e:
            raise InvalidParametersError("dependent_form_solve", f"no image for generator {e}")
        result = result + wedge_all(*factors) * coeff
    return result


def dependent_form_solve(
    geom_total: GeometrySystem,
    geom_reduced: Optional[GeometrySystem],
    ansatz: DependentAnsatz
) -> Decomposition:
    """
    Impose d(total form) = d(reduced form) on the matched generators.

    Args:
        geom_total: Total-space geometry
        geom_reduced: Reduced geometry whose coframe the images live in
        ansatz: Pullback with unknown coefficients

    Returns:
        Decomposition with the solved forms; incompatible lists the
        conditions that cannot hold (no integral variety)
    """
    if not ansatz.dependent or geom_reduced is None:
        return Decomposition(ansatz.name)

    equations: List[Expr] = []
    for total_name, reduced_name in ansatz.matches:
        lhs = pullback(geom_total.d_rule(geom_total.coframe.by_name(total_name)), ansatz.images)
        rhs = geom_reduced.d_rule(geom_reduced.coframe.by_name(reduced_name))
        equations.extend(c for _, c in (lhs - rhs).items())
    logger.info(
        f"{ansatz.name}: {len(equations)} coefficient equations "
        f"in {len(ansatz.unknowns)} unknowns"
    )

    elimination: Elimination = eliminate(equations, ansatz.unknowns)
    solution = dict(elimination.solution)
    forms = {
        name: ansatz.images[name].map_coefficients(lambda c: sympy.expand(c.xreplace(solution)))
        for name in ansatz.dependent
    }
    residuals = [sympy.expand(e.xreplace(solution)) for e in equations]
    verified = not elimination.conditions and all(r == 0 for r in residuals)
    if elimination.conditions:
        logger.warning(f"{ansatz.name}: {len(elimination.conditions)} incompatibility conditions")
    return Decomposition(
        ansatz.name,
        forms=forms,
        solution=solution,
        zero=elimination.forced_zero(),
        free=elimination.free,
        incompatible=list(elimination.conditions),
        verified=verified,
    )


def _general_combination(
    family: str,
    head: Sequence[int],
    reduced: GeometrySystem,
    gens: Sequence[Tuple[Tuple[int, ...], str]],
    unknowns: List[sympy.Symbol]
) -> FormExpr:
    """sum_g family[head, indices(g)] g over the listed reduced generators."""
    form = FormExpr()
    for indices, name in gens:
        u = _unknown(family, *head, *indices)
        unknowns.append(u)
        form = form + FormExpr.generator(reduced.coframe.by_name(name), u)
    return form


def riemannian_submersion_ansatz(
    total: GeometrySystem,
    reduced: GeometrySystem
) -> DependentAnsatz:
    """omega_ij and omega_ai of Riemannian(p+q) as unknown combinations.

    omega_ij = pi_ij + N_ija omega_a + C_ijk pi_k + U_ijkl pi_kl + V_ijab omega_ab
    omega_ai = K_iab omega_b - M_ija pi_j + A_aibc omega_bc + B_aijk pi_jk
    """
    p, q = reduced.params["p"], reduced.params["q"]
    base = list(range(1, p + 1))
    fibre = list(range(p + 1, p + q + 1))
    pairs = lambda values: [(x, y) for k, x in enumerate(values) for y in values[k + 1:]]
    name = lambda family, *idx: f"{family}[{','.join(str(i) for i in idx)}]"

    images: Dict[str, FormExpr] = {}
    for i in base:
        images[name("omega", i)] = reduced.form("pi", i)
    for a in fibre:
        images[name("omega", a)] = reduced.form("omega", a)
    for a, b in pairs(fibre):
        images[name("omega", a, b)] = reduced.form("omega", a, b)

    vertical_pairs = {
        "U": [((k, l), name("pi", k, l)) for k, l in pairs(base)],
        "V": [((a, b), name("omega", a, b)) for a, b in pairs(fibre)],
    }
    families: Dict[str, List[sympy.Symbol]] = {f: [] for f in ("A", "B", "U", "V", "C", "N")}
    fibre_forms = [((a,), name("omega", a)) for a in fibre]
    base_forms = [((k,), name("pi", k)) for k in base]
    dependent = []
    for i, j in pairs(base):
        form = reduced.form("pi", i, j)
        form = form + _general_combination("N", (i, j), reduced, fibre_forms, families["N"])
        form = form + _general_combination("C", (i, j), reduced, base_forms, families["C"])
        form = form + _general_combination("U", (i, j), reduced, vertical_pairs["U"], families["U"])
        form = form + _general_combination("V", (i, j), reduced, vertical_pairs["V"], families["V"])
        images[name("omega", i, j)] = form
        dependent.append(name("omega", i, j))

    m_unknowns: Dict[Tuple[int, ...], sympy.Symbol] = {}
    k_unknowns: Dict[Tuple[int, ...], sympy.Symbol] = {}
    for i in base:
        for a in fibre:
            omega_ai = FormExpr()
            for b in fibre:
                k_unknowns[(i, a, b)] = _unknown("K", i, a, b)
                omega_ai = omega_ai + reduced.form("omega", b) * k_unknowns[(i, a, b)]
            for j in base:
                m_unknowns[(i, j, a)] = _unknown("M", i, j, a)
                omega_ai = omega_ai - reduced.form("pi", j) * m_unknowns[(i, j, a)]
            omega_ai = omega_ai + _general_combination(
                "A", (a, i), reduced, vertical_pairs["V"], families["A"]
            )
            omega_ai = omega_ai + _general_combination(
                "B", (a, i), reduced, vertical_pairs["U"], families["B"]
            )
            # omega[i,a] with i < a is the stored generator, omega_ai = -omega_ia
            images[name("omega", i, a)] = -omega_ai
            dependent.append(name("omega", i, a))

    # non-canonical index orders first so they become the pivots
    m_order = sorted(m_unknowns, key=lambda idx: (idx[0] < idx[1], idx))
    k_order = sorted(k_unknowns, key=lambda idx: (idx[1] <= idx[2], idx))
    unknowns = (
        [u for f in ("A", "B", "U", "V", "C", "N") for u in families[f]]
        + [m_unknowns[idx] for idx in m_order]
        + [k_unknowns[idx] for idx in k_order]
    )
    matches = [(name("omega", i), name("pi", i)) for i in base]
    return DependentAnsatz(
        f"RiemannianSubmersion(p={p},q={q})", images, unknowns, matches, dependent
    )


def weyl_codim1_ansatz(total: GeometrySystem, reduced: GeometrySystem) -> DependentAnsatz:
    """omega_ij, omega_i0 and tau of Weyl(p+1) as unknown combinations.

    omega_ij = pi_ij + C_ijk omega_k + N_ij omega_0 + V_ijkl pi_kl + Y_ij varpi
    omega_i0 = B_ij omega_j + L_i omega_0 + Z_ikl pi_kl + X_i varpi
    tau = varpi + E0 omega_0 + H_kl pi_kl

    The horizontal part of tau is absorbed into varpi, so tau carries no
    omega_k term.
    """
    p = reduced.params["p"]
    t = p + 1
    base = list(range(1, p + 1))
    pairs = lambda values: [(x, y) for k, x in enumerate(values) for y in values[k + 1:]]
    name = lambda family, *idx: f"{family}[{','.join(str(i) for i in idx)}]"
    vertical = [((k, l), name("pi", k, l)) for k, l in pairs(base)]
    horizontal = [((k,), name("omega", k)) for k in base]
    omega0 = [((), "omega0")]
    varpi = [((), "varpi")]

    families: Dict[str, List[sympy.Symbol]] = {
        f: [] for f in ("V", "Z", "Y", "X", "H", "C", "B", "N", "L")
    }
    images: Dict[str, FormExpr] = {}
    for i in base:
        images[name("omega", i)] = reduced.form("omega", i)
    images[name("omega", t)] = reduced.form("omega0")

    dependent = []
    for i, j in pairs(base):
        form = reduced.form("pi", i, j)
        form = form + _general_combination("C", (i, j), reduced, horizontal, families["C"])
        form = form + _general_combination("N", (i, j), reduced, omega0, families["N"])
        form = form + _general_combination("V", (i, j), reduced, vertical, families["V"])
        form = form + _general_combination("Y", (i, j), reduced, varpi, families["Y"])
        images[name("omega", i, j)] = form
        dependent.append(name("omega", i, j))
    for i in base:
        form = _general_combination("B", (i,), reduced, horizontal, families["B"])
        form = form + _general_combination("L", (i,), reduced, omega0, families["L"])
        form = form + _general_combination("Z", (i,), reduced, vertical, families["Z"])
        form = form + _general_combination("X", (i,), reduced, varpi, families["X"])
        images[name("omega", i, t)] = form
        dependent.append(name("omega", i, t))

    expansion = sympy.Symbol("E0")
    tau = reduced.form("varpi") + reduced.form("omega0") * expansion
    tau = tau + _general_combination("H", (), reduced, vertical, families["H"])
    images["tau"] = tau
    dependent.append("tau")

    unknowns = [u for f in families for u in families[f]]
    unknowns.append(expansion)
    matches = [(name("omega", i), name("omega", i)) for i in base]
    return DependentAnsatz(f"WeylSubmersionCodim1(p={p})", images, unknowns, matches, dependent)


def riemannian_decomposition(p: int, q: int) -> Decomposition:
    """Dependent forms of Riemannian(p+q) over a Riemannian submersion."""
    if q == 0:
        return Decomposition(f"RiemannianSubmersion(p={p},q=0)")
    total = riemannian(p + q)
    reduced = riemannian_submersion(p, q)
    return dependent_form_solve(total, reduced, riemannian_submersion_ansatz(total, reduced))


def weyl_codim1_decomposition(p: int) -> Decomposition:
    """Dependent forms of Weyl(p+1) over a codimension-1 Weyl submersion."""
    total = weyl(p + 1)
    reduced = weyl_submersion_codim1(p)
    return dependent_form_solve(total, reduced, weyl_codim1_ansatz(total, reduced))
