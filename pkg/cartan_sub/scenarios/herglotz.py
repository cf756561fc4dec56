"""Rigid flows in homogeneous and conformally flat spaces are Killing flows."""
import logging
from itertools import product
from typing import Dict, List, Optional, Set
import sympy
from sympy import Expr
from cartan_sub.config import settings
from cartan_sub.core.errors import DimensionGuardError, InvalidParametersError
from cartan_sub.counting.characters import cartan_characters
from cartan_sub.counting.tables import TIME, SeedRow, SeedTable
from cartan_sub.identities.relations import Relation
from cartan_sub.invariants.reduction import monomial_terms
from cartan_sub.models.responses import FAILED, PASS, CertificateBranch, CertificateModel
from cartan_sub.scenarios.certificate import branch_status, finish, linear_system, record_pivots
from cartan_sub.scenarios.dictionary import (
    WEYL_TRIVIAL,
    CurvatureDictionary,
    born_rigid_dictionary,
    weyl_component,
)
from cartan_sub.scenarios.fibre import (
    fibre_derivative,
    primed_symbols,
    sample_coefficients,
    time_index,
    total_curvature_vocabulary,
)

logger = logging.getLogger(__name__)

n_symbol = sympy.Symbol("n", positive=True)

# Printed pivot rationals of the conformally flat argument, as functions of n
STEP1_PIVOTS = {
    "(n^2-4n+5)/((n-2)(n-3))": (
        (n_symbol ** 2 - 4 * n_symbol + 5) / ((n_symbol - 2) * (n_symbol - 3))
    ),
    "6/(n-3)": 6 / (n_symbol - 3),
    "3": sympy.Integer(3),
}
STEP2_PIVOTS = {"2/(n-2)": 2 / (n_symbol - 2)}


def nonzero_for_all_n(value: Expr, start: int = 4) -> bool:
    """No zero and no pole of a rational function of n on [start, oo)."""
    numerator, denominator = sympy.fraction(sympy.together(value))
    domain = sympy.Interval(start, sympy.oo)
    roots = sympy.solveset(numerator, n_symbol, domain)
    poles = sympy.solveset(denominator, n_symbol, domain)
    return roots == sympy.S.EmptySet and poles == sympy.S.EmptySet


def _pivot_values(pivots: Dict[str, Expr], n: int) -> Dict[str, Expr]:
    return {name: sympy.nsimplify(value.subs(n_symbol, n)) for name, value in pivots.items()}


def _base(dictionary: CurvatureDictionary) -> List[int]:
    return list(dictionary.geometry.vocabulary.classes["i"].values())


def _heads(expr: Expr, vocabulary) -> Set[str]:
    return {
        vocabulary.parse(s).head for s in expr.free_symbols if vocabulary.is_invariant(s)
    }


def _flat_table(n: int) -> SeedTable:
    """Irrotational rigid flow: only K_i and its flow derivative survive."""
    return SeedTable(
        name="BornRigidIrrotational",
        params=("n",),
        extents={TIME: "1", "i": "n-1"},
        ordering=(TIME, "i"),
        letters={x: "i" for x in "ijkl"},
        rows=[SeedRow("K[i]"), SeedRow("K[i;0]", seed=True)],
        truncation=1,
        notes=["flow index ranked first: K_i is evolved along the flow from its data on a curve"],
    )


def _killing_table(n: int) -> SeedTable:
    """Rotational rigid flow once M_ij;0 and K_i;0 vanish: no derivative is left free."""
    return SeedTable(
        name="BornRigidKilling",
        params=("n",),
        extents={TIME: "1", "i": "n-1"},
        ordering=(TIME, "i"),
        letters={x: "i" for x in "ijkl"},
        rows=[SeedRow("M[i,j]", "i>j"), SeedRow("K[i]")],
        truncation=1,
    )


def _rotational_branch(dictionary: CurvatureDictionary, total) -> CertificateBranch:
    geom = dictionary.geometry
    vocabulary = geom.vocabulary
    base = _base(dictionary)
    t = time_index(geom)
    pairs = [(i, j) for i in base for j in base if i < j]

    curvature_eqs = []
    for i, j in pairs:
        constant = total.expr("R", (i, j, i, j))
        curvature_eqs.append(
            fibre_derivative(constant - dictionary.component(i, j, i, j), geom, {"S"})
        )
    vorticity_unknowns = [
        vocabulary.expr("M", (i, j)) * vocabulary.expr("M", (i, j), (t,)) for i, j in pairs
    ]
    step_a = linear_system(
        "d/dt (R_ijij - S_ijij + 3 M_ij^2)", curvature_eqs, vorticity_unknowns
    )

    mixed_eqs = []
    for (i, j), k in product(pairs, base):
        constant = total.expr("R", (i, j, k, t))
        mixed_eqs.append(
            fibre_derivative(constant - dictionary.component(i, j, k, t), geom, {"S", "M"})
        )
    acceleration_unknowns = [
        vocabulary.expr("M", (a, b)) * vocabulary.expr("K", (c,), (t,))
        for (a, b), c in product(pairs, base)
    ]
    step_b = linear_system(
        "d/dt (R_ijk0 - M_ij;k + M_jk K_i - M_ik K_j - M_ij K_k)",
        mixed_eqs,
        acceleration_unknowns,
    )

    systems = [step_a, step_b]
    status = branch_status(systems, systems)
    characters = None
    if status == PASS:
        characters = list(cartan_characters(_killing_table(dictionary.n), n=dictionary.n).s)
    return CertificateBranch(
        label="M!=0",
        hypotheses=[
            "total-space curvature constant along the flow",
            "S_ijkl;0 = 0",
            "M and its base derivatives fibre-independent once M_ij M_ij;0 = 0",
        ],
        systems=systems,
        relations=[f"{u} = 0" for u in step_a.forced_zero + step_b.forced_zero],
        characters=characters,
        conclusion=(
            "M_ij;0 = 0 and K_i;0 = 0: Killing flow" if status == PASS
            else "fibre dependence not excluded"
        ),
        status=status,
    )


def _irrotational_branch(dictionary: CurvatureDictionary, total) -> CertificateBranch:
    geom = dictionary.geometry
    vocabulary = geom.vocabulary
    n = dictionary.n
    no_vorticity = {
        s: 0 for label, value in dictionary.equations().items() for s in value.free_symbols
        if vocabulary.is_invariant(s) and vocabulary.parse(s).head == "M"
    }
    relations: List[str] = []
    flat: List[str] = []
    for label, value in dictionary.equations().items():
        indices = tuple(int(x) for x in label[2:-1].split(","))
        expr = sympy.expand(total.expr("R", indices) - value.xreplace(no_vorticity))
        relation = Relation.from_expr(expr, vocabulary, "M=0")
        if relation is not None:
            relations.append(str(relation))
        flat_expr = sympy.expand(-value.xreplace(no_vorticity))
        flat_relation = Relation.from_expr(flat_expr, vocabulary, "flat")
        if flat_relation is not None and str(flat_relation) not in flat:
            flat.append(str(flat_relation))
    vector = cartan_characters(_flat_table(n), n=n)
    hypotheses = ["M_ij = 0", "total-space curvature constant along the flow"]
    if n > 2:
        hypotheses.append("R_ijk0 = 0 forces a flat total space")
        relations.extend(f"flat: {r}" for r in flat)
    return CertificateBranch(
        label="M=0",
        hypotheses=hypotheses,
        relations=relations,
        characters=list(vector.s),
        conclusion=f"depends on {vector.character(1)} functions of 1 variable",
        status=PASS,
    )


def herglotz_noether_homogeneous(n: int) -> CertificateModel:
    """
    Rotational rigid flows in a space of constant curvature are Killing flows.

    Args:
        n: Total dimension (at least 2)

    Returns:
        Certificate with a rotational branch (p >= 2) and an irrotational branch
    """
    if n < 2:
        raise InvalidParametersError("BornRigid", "n must be at least 2")
    logger.info(f"Herglotz-Noether, homogeneous case, n={n}")
    dictionary = born_rigid_dictionary(n, truncation=2)
    total = total_curvature_vocabulary(n)
    branches = []
    if n >= 3:
        branches.append(_rotational_branch(dictionary, total))
    branches.append(_irrotational_branch(dictionary, total))
    certificate = CertificateModel(
        scenario="herglotz-homogeneous",
        dims={"n": n},
        hypotheses=["Born rigid flow", "total-space curvature covariantly constant"],
        branches=branches,
        conclusion="every rotational rigid flow is a Killing flow",
    )
    return finish(certificate)


def _first_class(dictionary: CurvatureDictionary) -> List[Expr]:
    """W_ijkl for (ij) <= (kl) and W_i0j0 for i <= j, expanded."""
    base = _base(dictionary)
    t = time_index(dictionary.geometry)
    exprs = []
    for i, j, k, l in product(base, repeat=4):
        if i < j and k < l and (i, j) <= (k, l):
            exprs.append(weyl_component(dictionary, i, j, k, l))
    for i, j in product(base, repeat=2):
        if i <= j:
            exprs.append(weyl_component(dictionary, i, t, j, t))
    return [e for e in (sympy.expand(x) for x in exprs) if e != 0]


def _quadratic_system(dictionary: CurvatureDictionary):
    """
    W = 0 as a linear system in the monomials of M and K.

    The base curvature S is fibre-independent and sits on the known side, so
    it is set to zero: a vorticity monomial forced to zero here equals a
    combination of S components in the full system. Monomials containing K
    are ranked first so that they are eliminated before any M quadratic.

    Returns:
        The recorded system and its vorticity columns
    """
    vocabulary = dictionary.geometry.vocabulary
    exprs = _first_class(dictionary)
    curvature = {
        s: 0 for e in exprs for s in e.free_symbols if "S" in _heads(s, vocabulary)
    }
    exprs = [e for e in (sympy.expand(x.xreplace(curvature)) for x in exprs) if e != 0]
    monomials = {m for e in exprs for m in monomial_terms(e)}
    accelerations = sorted(
        (m for m in monomials if "K" in _heads(m, vocabulary)), key=sympy.default_sort_key
    )
    vorticity = sorted(set(monomials) - set(accelerations), key=sympy.default_sort_key)
    system = linear_system(
        "W_ijkl = 0, W_i0j0 = 0 in the quadratics of M with the K terms eliminated first",
        exprs,
        accelerations + vorticity,
    )
    return record_pivots(system), [str(m) for m in vorticity]


def _step1(dictionary: CurvatureDictionary, seed: int) -> CertificateBranch:
    geom = dictionary.geometry
    quadratic, quadratics = _quadratic_system(dictionary)
    exprs = [fibre_derivative(e, geom, {"S"}) for e in _first_class(dictionary)]
    exprs = [e for e in exprs if e != 0]
    unknowns = primed_symbols(exprs, geom)
    sampled = record_pivots(linear_system(
        "d/dt W_ijkl = 0, d/dt W_i0j0 = 0 at a rational point",
        sample_coefficients(exprs, unknowns, seed),
        unknowns,
    ))
    vorticity = [str(u) for u in unknowns if geom.vocabulary.parse(u).head == "M"]
    forced = set(sampled.forced_zero)
    undetermined = [u for u in vorticity if u not in forced]
    by_quadratics = bool(quadratics) and set(quadratics) <= set(quadratic.forced_zero)
    by_sample = bool(vorticity) and not undetermined
    consistent = not (sampled.inconsistent or quadratic.inconsistent)
    status = PASS if consistent and (by_sample or by_quadratics) else FAILED
    if by_quadratics:
        conclusion = "every M_ij M_kl is a combination of S: the M_ij are fibre-independent"
    elif by_sample:
        conclusion = "the M_ij are independent of the fibre coordinates"
    else:
        conclusion = f"fibre derivatives {undetermined} are not determined by the Weyl components"
    return CertificateBranch(
        label="step 1: vorticity",
        hypotheses=["W = 0", "S_ijkl;0 = 0", f"coefficients sampled with seed {seed}"],
        systems=[quadratic, sampled],
        relations=[f"{u} = 0" for u in vorticity if u in forced],
        conclusion=conclusion,
        status=status,
    )


def _step2(dictionary: CurvatureDictionary, seed: int) -> CertificateBranch:
    geom = dictionary.geometry
    vocabulary = geom.vocabulary
    base = _base(dictionary)
    t = time_index(geom)
    exprs = []
    for i, j, k in product(base, repeat=3):
        if i < j:
            component = weyl_component(dictionary, i, j, k, t)
            exprs.append(fibre_derivative(component, geom, {"S", "M"}))
    exprs = [e for e in exprs if e != 0]
    unknowns = [vocabulary.expr("K", (c,), (t,)) for c in base]

    generic = record_pivots(linear_system(
        "d/dt W_ijk0 = 0 at a rational point",
        sample_coefficients(exprs, unknowns, seed),
        unknowns,
    ))
    single = {
        s: 0 for e in exprs for s in e.free_symbols
        if vocabulary.is_invariant(s) and vocabulary.parse(s).head == "M"
    }
    vortex = vocabulary.expr("M", (base[0], base[1]))
    vortex_symbol = next(iter(vortex.free_symbols))
    single[vortex_symbol] = vortex / vortex_symbol
    one_vortex = record_pivots(linear_system(
        "d/dt W_ijk0 = 0 with M_12 = 1 as the only vorticity",
        sample_coefficients([sympy.expand(e.xreplace(single)) for e in exprs], unknowns, seed),
        unknowns,
    ))
    systems = [generic, one_vortex]
    status = branch_status(systems, systems)
    return CertificateBranch(
        label="step 2: acceleration",
        hypotheses=["W = 0", "M fibre-independent (step 1)", "some M_ij != 0"],
        systems=systems,
        relations=[f"{u} = 0" for u in generic.forced_zero],
        conclusion=(
            "the K_i are independent of the fibre coordinates" if status == PASS
            else "K_i;0 not determined"
        ),
        status=status,
    )


def _printed_pivot_notes(certificate: CertificateModel, n: int) -> List[str]:
    """Where the printed pivot rationals meet the recorded elimination pivots."""
    recorded = {
        sympy.Rational(value)
        for branch in certificate.branches
        for system in branch.systems
        for value in system.nonzero.values()
    }
    notes = []
    printed = {**STEP1_PIVOTS, **STEP2_PIVOTS}
    for name, value in _pivot_values(printed, n).items():
        found = "among" if sympy.Rational(value) in recorded else "not among"
        notes.append(f"printed pivot {name} = {value} at n={n} is {found} the recorded pivots")
    return notes


def herglotz_noether_conformal(n: int, seed: Optional[int] = None) -> CertificateModel:
    """
    Rotational rigid flows in a conformally flat space are Killing flows.

    Args:
        n: Total dimension (at least 4)
        seed: Seed of the rational sample points (settings default)

    Returns:
        Certificate with the vorticity and acceleration steps; every system
        records the pivots its elimination divides by

    Raises:
        DimensionGuardError: n < 4
    """
    if n < 4:
        logger.error(f"Conformally flat Herglotz-Noether requested at n={n}")
        raise DimensionGuardError("herglotz-conformal", n, WEYL_TRIVIAL)
    seed = settings.seed if seed is None else seed
    logger.info(f"Herglotz-Noether, conformally flat case, n={n}")
    dictionary = born_rigid_dictionary(n, truncation=2)
    printed = list(STEP1_PIVOTS.values()) + list(STEP2_PIVOTS.values())
    pivots_ok = all(nonzero_for_all_n(v) for v in printed)
    certificate = CertificateModel(
        scenario="herglotz-conformal",
        dims={"n": n},
        hypotheses=["Born rigid flow", "M != 0", "total space conformally flat"],
        branches=[_step1(dictionary, seed), _step2(dictionary, seed + 1)],
        conclusion="every rotational rigid flow is a Killing flow",
        notes=[
            "printed pivot rationals nonzero for all n >= 4" if pivots_ok
            else "a printed pivot rational vanishes for some n >= 4"
        ],
    )
    certificate.notes.extend(_printed_pivot_notes(certificate, n))
    if not pivots_ok:
        certificate.status = FAILED
    return finish(certificate)
