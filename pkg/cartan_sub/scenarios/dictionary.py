"""Total-space curvature in terms of submersion invariants, and its contractions."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import numpy as np
import sympy
from sympy import Expr
from cartan_sub.config import settings
from cartan_sub.core.errors import DimensionGuardError, InvalidParametersError
from cartan_sub.forms.algebra import FormExpr, horizontal_part, vertical_part
from cartan_sub.forms.exterior import exterior_d
from cartan_sub.geometries.builtins import born_rigid, riemannian_submersion, weyl_submersion_codim1
from cartan_sub.geometries.system import GeometrySystem
from cartan_sub.identities.derive import derive_identities
from cartan_sub.identities.relations import RelationSet
from cartan_sub.invariants.symbols import RIEMANN
from cartan_sub.models.responses import FAILED, PASS, CertificateBranch, CertificateModel

logger = logging.getLogger(__name__)

HALF = sympy.Rational(1, 2)
WEYL_TRIVIAL = "the Weyl tensor is trivial"

Index4 = Tuple[int, int, int, int]
Family = Callable[[int, int, int, int], Expr]

# Lookup priority; when an orbit meets two families the first one wins and
# the other is a consistency check.
SUBMERSION_FAMILIES = ("iiii", "aaaa", "iiaa", "iiia", "aiaa", "aiai", "aiii")
FLOW_FAMILIES = ("iiii", "iii0", "0i0i")


@dataclass
class CurvatureDictionary:
    """R_{mu nu rho lambda} of the total space, one closure per index-class pattern.

    Attributes:
        geometry: Geometry whose invariants the components are written in
        families: Class pattern (e.g. "iiaa") -> component closure
        priority: Pattern lookup order
    """

    geometry: GeometrySystem
    families: Dict[str, Family]
    priority: Tuple[str, ...]
    _ricci: Dict[Tuple[int, int], Expr] = field(default_factory=dict, repr=False)
    _scalar: Optional[Expr] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.geometry.dimension

    @property
    def indices(self) -> List[int]:
        return list(self.geometry.frame)

    @property
    def time(self) -> Optional[int]:
        classes = self.geometry.vocabulary.classes
        return classes["0"].maximum if "0" in classes else None

    def class_of(self, index: int) -> str:
        for cls in self.geometry.vocabulary.deriv_classes:
            if cls.contains(index):
                return cls.name
        raise InvalidParametersError(self.geometry.name, f"index {index} outside the frame")

    def pattern(self, indices: Sequence[int]) -> str:
        return "".join(self.class_of(x) for x in indices)

    def representatives(self, *indices: int) -> List[Tuple[str, Index4, int]]:
        """Orbit images that some family covers, as (pattern, image, sign)."""
        orbit = RIEMANN.orbit(indices)
        if any(sign == 0 for sign in orbit.values()):
            return []
        found = []
        for image, sign in sorted(orbit.items()):
            pattern = self.pattern(image)
            if pattern in self.families:
                found.append((pattern, image, sign))
        return found

    def component(self, mu: int, nu: int, rho: int, lam: int) -> Expr:
        """Signed component, zero on the fixed points of the Riemann symmetries."""
        found = self.representatives(mu, nu, rho, lam)
        if not found:
            if len(set((mu, nu))) == 1 or len(set((rho, lam))) == 1:
                return sympy.Integer(0)
            raise KeyError(f"No curvature family covers ({mu},{nu},{rho},{lam})")
        rank = {pattern: k for k, pattern in enumerate(self.priority)}
        pattern, image, sign = min(found, key=lambda item: (rank[item[0]], item[1]))
        return sympy.expand(sign * self.families[pattern](*image))

    def ricci(self, nu: int, lam: int) -> Expr:
        """R_{nu lambda} = sum_mu R_{mu nu mu lambda}."""
        key = (min(nu, lam), max(nu, lam))
        if key not in self._ricci:
            trace = sum(self.component(mu, nu, mu, lam) for mu in self.indices)
            self._ricci[key] = sympy.expand(trace)
        return self._ricci[key]

    def scalar(self) -> Expr:
        if self._scalar is None:
            self._scalar = sympy.expand(sum(self.ricci(mu, mu) for mu in self.indices))
        return self._scalar

    def equations(self) -> Dict[str, Expr]:
        """One entry per independent component: label -> expression."""
        entries: Dict[str, Expr] = {}
        for idx in product(self.indices, repeat=4):
            mu, nu, rho, lam = idx
            if not (mu < nu and rho < lam and (mu, nu) <= (rho, lam)):
                continue
            value = self.component(*idx)
            entries[f"R[{mu},{nu},{rho},{lam}]"] = value
        return entries


def curvature_dictionary(p: int, q: int, truncation: Optional[int] = None) -> CurvatureDictionary:
    """
    Seven component families of a Riemannian submersion's total curvature.

    Args:
        p: Base dimension
        q: Fibre dimension
        truncation: Derivative truncation of the underlying geometry

    Returns:
        CurvatureDictionary over riemannian_submersion(p, q); base indices
        1..p, fibre indices p+1..p+q
    """
    geom = riemannian_submersion(p, q, truncation)
    inv = geom.inv
    base = list(geom.vocabulary.classes["i"].values())
    fibre = list(geom.vocabulary.classes["a"].values())

    def ijkl(i, j, k, l):
        value = inv("S_base", i, j, k, l)
        for a in fibre:
            value += inv("M", i, l, a) * inv("M", j, k, a) - inv("M", i, k, a) * inv("M", j, l, a)
            value -= 2 * inv("M", i, j, a) * inv("M", k, l, a)
        return value

    def abcd(a, b, c, d):
        value = inv("S_fibre", a, b, c, d)
        for i in base:
            value += -inv("K", i, a, c) * inv("K", i, b, d) + inv("K", i, a, d) * inv("K", i, b, c)
        return value

    def ijab(i, j, a, b):
        value = -inv("M", i, j, a, derivs=(b,)) + inv("M", i, j, b, derivs=(a,))
        for k in base:
            value += inv("M", i, k, b) * inv("M", j, k, a) - inv("M", i, k, a) * inv("M", j, k, b)
        for c in fibre:
            value += inv("K", j, a, c) * inv("K", i, b, c) - inv("K", i, a, c) * inv("K", j, b, c)
        return value

    def ijkb(i, j, k, b):
        value = inv("M", i, j, b, derivs=(k,))
        for a in fibre:
            value += -inv("M", j, k, a) * inv("K", i, a, b) + inv("M", i, k, a) * inv("K", j, a, b)
            value += inv("M", i, j, a) * inv("K", k, a, b)
        return value

    def aibc(a, i, b, c):
        value = -inv("K", i, a, b, derivs=(c,)) + inv("K", i, a, c, derivs=(b,))
        for k in base:
            value += -inv("M", k, i, b) * inv("K", k, a, c) + inv("M", k, i, c) * inv("K", k, a, b)
        return value

    def aibj(a, i, b, j):
        value = -inv("M", i, j, a, derivs=(b,)) - inv("K", i, a, b, derivs=(j,))
        for k in base:
            value += inv("M", i, k, b) * inv("M", j, k, a)
        for c in fibre:
            value -= inv("K", i, a, c) * inv("K", j, b, c)
        return value

    def aijk(a, i, j, k):
        value = inv("M", i, j, a, derivs=(k,)) - inv("M", i, k, a, derivs=(j,))
        for b in fibre:
            value -= 2 * inv("M", j, k, b) * inv("K", i, a, b)
        return value

    families = {
        "iiii": ijkl, "aaaa": abcd, "iiaa": ijab, "iiia": ijkb,
        "aiaa": aibc, "aiai": aibj, "aiii": aijk,
    }
    logger.debug(f"Curvature dictionary of {geom.label}: {len(families)} families")
    return CurvatureDictionary(geom, families, SUBMERSION_FAMILIES)


def born_rigid_dictionary(n: int, truncation: Optional[int] = None) -> CurvatureDictionary:
    """Born rigid specialization: R_ijkl, R_ijk0 and R_0i0j with t = n as the flow index."""
    geom = born_rigid(n, truncation)
    inv = geom.inv
    base = list(geom.vocabulary.classes["i"].values())

    def ijkl(i, j, k, l):
        return (
            inv("S", i, j, k, l) + inv("M", i, l) * inv("M", j, k)
            - inv("M", i, k) * inv("M", j, l) - 2 * inv("M", i, j) * inv("M", k, l)
        )

    def ijk0(i, j, k, t):
        return (
            inv("M", i, j, derivs=(k,)) - inv("M", j, k) * inv("K", i)
            + inv("M", i, k) * inv("K", j) + inv("M", i, j) * inv("K", k)
        )

    def titj(t, i, u, j):
        value = -HALF * (inv("K", i, derivs=(j,)) + inv("K", j, derivs=(i,)))
        value -= inv("K", i) * inv("K", j)
        for k in base:
            value += inv("M", i, k) * inv("M", j, k)
        return value

    return CurvatureDictionary(geom, {"iiii": ijkl, "iii0": ijk0, "0i0i": titj}, FLOW_FAMILIES)


# Contractions

def _delta(x: int, y: int) -> int:
    return 1 if x == y else 0


def weyl_component(dictionary: CurvatureDictionary, mu: int, nu: int, rho: int, lam: int) -> Expr:
    """Trace-free part of the Riemann tensor, Riemannian signature."""
    n = dictionary.n
    if n < 4:
        logger.error(f"Weyl tensor requested for n={n}")
        raise DimensionGuardError("weyl", n, WEYL_TRIVIAL)
    ric = dictionary.ricci
    value = dictionary.component(mu, nu, rho, lam)
    value -= sympy.Rational(1, n - 2) * (
        _delta(mu, rho) * ric(nu, lam) - _delta(mu, lam) * ric(nu, rho)
        - _delta(nu, rho) * ric(mu, lam) + _delta(nu, lam) * ric(mu, rho)
    )
    trace = _delta(mu, rho) * _delta(nu, lam) - _delta(mu, lam) * _delta(nu, rho)
    if trace:
        value += sympy.Rational(trace, (n - 1) * (n - 2)) * dictionary.scalar()
    return sympy.expand(value)


CONTRACTIONS = ("ricci", "scalar", "einstein", "weyl")


def contractions(dictionary: CurvatureDictionary, which: str) -> Dict[str, Expr]:
    """
    Componentwise contraction of a curvature dictionary.

    Args:
        dictionary: Curvature dictionary
        which: "ricci", "scalar", "einstein" or "weyl"

    Returns:
        Component label -> expression, zero components omitted

    Raises:
        DimensionGuardError: Weyl tensor below dimension 4
    """
    idx = dictionary.indices
    result: Dict[str, Expr] = {}
    if which == "ricci":
        for nu, lam in product(idx, repeat=2):
            if nu <= lam and dictionary.ricci(nu, lam) != 0:
                result[f"R[{nu},{lam}]"] = dictionary.ricci(nu, lam)
    elif which == "scalar":
        result["R"] = dictionary.scalar()
    elif which == "einstein":
        scalar = dictionary.scalar()
        for nu, lam in product(idx, repeat=2):
            if nu <= lam:
                value = sympy.expand(dictionary.ricci(nu, lam) - HALF * _delta(nu, lam) * scalar)
                if value != 0:
                    result[f"G[{nu},{lam}]"] = value
    elif which == "weyl":
        for mu, nu, rho, lam in product(idx, repeat=4):
            if mu < nu and rho < lam and (mu, nu) <= (rho, lam):
                value = weyl_component(dictionary, mu, nu, rho, lam)
                if value != 0:
                    result[f"W[{mu},{nu},{rho},{lam}]"] = value
    else:
        raise InvalidParametersError(
            "contractions", f"unknown contraction '{which}', use one of {CONTRACTIONS}"
        )
    logger.debug(f"{which} of {dictionary.geometry.label}: {len(result)} components")
    return result


def fluid_lines(p: int, truncation: Optional[int] = None) -> Tuple[GeometrySystem, Dict[str, Expr]]:
    """
    Perfect-fluid lines of a shear-free flow on the reduced Weyl space.

    The momentum lines (R_0j = 0) hold in general; the pressure lines assume
    K = 0 and lambda_0 = E0, where the pressure read off from R_ii must not
    depend on i.

    Returns:
        The WeylSubmersionCodim1 geometry and label -> expression; momentum[j]
        vanishes, pressure[i] equals the pressure for every i
    """
    geom = weyl_submersion_codim1(p, truncation)
    inv = geom.inv
    base = list(geom.vocabulary.classes["i"].values())
    e0 = inv("E0")
    lines: Dict[str, Expr] = {}
    for j in base:
        value = p * e0 * inv("K", j)
        for i in base:
            value += inv("M", i, j, derivs=(i,)) + 2 * inv("M", i, j) * inv("K", i)
        lines[f"momentum[{j}]"] = sympy.expand(value)
    ricci = {i: sum(inv("S", k, i, k, i) for k in base) for i in base}
    scalar = sum(ricci.values())
    vorticity = sum(inv("M", j, k) ** 2 for j in base for k in base)
    for i in base:
        value = ricci[i] - HALF * scalar - 2 * sum(inv("M", i, j) ** 2 for j in base) + vorticity
        value += sympy.Rational(p * (p - 2), 2) * e0 ** 2
        lines[f"pressure[{i}]"] = sympy.expand(value)
    return geom, lines


# Checks

def total_connection(geom: GeometrySystem, x: int, y: int) -> FormExpr:
    """omega_xy of the total space on a reduced Riemannian submersion.

    omega_ij = pi_ij + M_ija omega_a and omega_ia = M_ija pi_j - K_iab omega_b.
    """
    if x == y:
        return FormExpr()
    base = geom.vocabulary.classes["i"]
    fibre = geom.vocabulary.classes["a"]
    w = geom.frame_form
    if base.contains(x) and base.contains(y):
        form = geom.connection("i", x, y)
        for a in fibre.values():
            form = form + w(a) * geom.inv("M", x, y, a)
        return form
    if fibre.contains(x) and fibre.contains(y):
        return geom.connection("a", x, y)
    if fibre.contains(x):
        return -total_connection(geom, y, x)
    form = FormExpr()
    for j in base.values():
        form = form + w(j) * geom.inv("M", x, j, y)
    for b in fibre.values():
        form = form - w(b) * geom.inv("K", x, y, b)
    return form


def structural_curvature(geom: GeometrySystem, x: int, y: int) -> FormExpr:
    """Omega_xy = d omega_xy + omega_xz ^ omega_zy."""
    omega = exterior_d(total_connection(geom, x, y), geom)
    for z in geom.frame:
        omega = omega + total_connection(geom, x, z) * total_connection(geom, z, y)
    return omega


Terms = List[Tuple[Fraction, Tuple[int, ...]]]


def _fraction_terms(expr: Expr, symbols: Sequence[sympy.Symbol]) -> Terms:
    expr = sympy.expand(expr)
    if expr == 0:
        return []
    if not symbols:
        value = sympy.Rational(expr)
        return [(Fraction(int(value.p), int(value.q)), ())]
    poly = sympy.Poly(expr, *symbols, domain="QQ")
    terms = []
    for monom, coeff in poly.terms():
        coeff = sympy.Rational(coeff)
        terms.append((Fraction(int(coeff.p), int(coeff.q)), monom))
    return terms


def _evaluate(terms: Terms, values: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for coeff, monom in terms:
        value = coeff
        for v, e in zip(values, monom):
            if e:
                value *= v ** e
        total += value
    return total


def random_assignment_oracle(
    exprs: Sequence[Expr],
    relations: RelationSet,
    assignments: int,
    seed: int
) -> List[int]:
    """
    Evaluate expressions at random points of the relation variety.

    Independent invariants get random rationals; every other symbol takes
    the value of its normal form. Returns the indices of expressions that
    evaluate to something nonzero at some point.
    """
    symbols = sorted({s for e in exprs for s in e.free_symbols}, key=lambda s: s.name)
    forms = {s: relations.normal_form(s) for s in symbols}
    independent = sorted({t for f in forms.values() for t in f.free_symbols}, key=lambda s: s.name)
    symbol_terms = {s: _fraction_terms(f, independent) for s, f in forms.items()}
    expr_terms = [_fraction_terms(e, symbols) for e in exprs]
    rng = np.random.default_rng(seed)
    failing = set()
    for _ in range(assignments):
        numerators = rng.integers(-9, 10, size=len(independent))
        denominators = rng.integers(1, 6, size=len(independent))
        point = [Fraction(int(a), int(b)) for a, b in zip(numerators, denominators)]
        values = [_evaluate(symbol_terms[s], point) for s in symbols]
        for k, terms in enumerate(expr_terms):
            if k not in failing and _evaluate(terms, values) != 0:
                failing.add(k)
    return sorted(failing)


def _cyclic_sums(dictionary: CurvatureDictionary) -> Dict[str, Expr]:
    sums: Dict[str, Expr] = {}
    idx = dictionary.indices
    c = dictionary.component
    for mu in idx:
        for nu, rho, lam in product(idx, repeat=3):
            if nu < rho < lam:
                value = c(mu, nu, rho, lam) + c(mu, rho, lam, nu) + c(mu, lam, nu, rho)
                sums[f"R[{mu},[{nu},{rho},{lam}]]"] = sympy.expand(value)
    return sums


def _pair_differences(dictionary: CurvatureDictionary) -> Dict[str, Expr]:
    differences: Dict[str, Expr] = {}
    seen = set()
    for idx in product(dictionary.indices, repeat=4):
        found = dictionary.representatives(*idx)
        if len(found) < 2:
            continue
        key = frozenset(image for _, image, _ in found)
        if key in seen:
            continue
        seen.add(key)
        values = [sign * dictionary.families[pattern](*image) for pattern, image, sign in found]
        for (pattern, image, _), value in zip(found[1:], values[1:]):
            differences[f"{found[0][1]} vs {image}"] = sympy.expand(values[0] - value)
    return differences


def _structural_differences(dictionary: CurvatureDictionary) -> Dict[str, Expr]:
    geom = dictionary.geometry
    frame = geom.frame
    differences: Dict[str, Expr] = {}
    for x, y in product(dictionary.indices, repeat=2):
        if x >= y:
            continue
        omega = structural_curvature(geom, x, y)
        for wedge_term, coeff in vertical_part(omega).items():
            label = "^".join(g.name for g in wedge_term)
            differences[f"Omega[{x},{y}] vertical {label}"] = coeff
        horizontal = horizontal_part(omega)
        for u, v in product(dictionary.indices, repeat=2):
            if u < v:
                value = horizontal.coefficient(frame[u], frame[v])
                value -= dictionary.component(x, y, u, v)
                differences[f"R[{x},{y},{u},{v}]"] = sympy.expand(value)
    return differences


def _residual_branch(
    label: str,
    exprs: Dict[str, Expr],
    relations: RelationSet
) -> CertificateBranch:
    residuals = []
    for name, expr in exprs.items():
        reduced = relations.normal_form(expr)
        if reduced != 0:
            residuals.append(f"{name}: {reduced}")
    status = PASS if not residuals else FAILED
    if residuals:
        logger.warning(f"{label}: {len(residuals)} nonzero residuals, first {residuals[0]}")
    return CertificateBranch(
        label=label,
        relations=residuals,
        conclusion=(
            f"{len(exprs)} expressions reduce to 0" if not residuals else "nonzero residuals"
        ),
        status=status,
    )


def verify_dictionary_consistency(
    p: int,
    q: int,
    assignments: Optional[int] = None,
    seed: Optional[int] = None
) -> CertificateModel:
    """
    Check the dictionary against the total-space Bianchi identity and the structure equations.

    Args:
        p: Base dimension
        q: Fibre dimension
        assignments: Random rational points for the oracle (settings default)
        seed: Oracle seed (settings default)

    Returns:
        Certificate whose branches hold the residuals of each check
    """
    if p + q > 6:
        logger.error(f"Dictionary consistency requested at p+q={p + q}")
        raise InvalidParametersError(
            "RiemannianSubmersion", "dictionary consistency needs p+q <= 6"
        )
    assignments = settings.random_assignments if assignments is None else assignments
    seed = settings.seed if seed is None else seed
    logger.info(f"Checking the curvature dictionary at p={p}, q={q}")

    dictionary = curvature_dictionary(p, q, truncation=2)
    relations = derive_identities(dictionary.geometry, order=1)
    cyclic = _cyclic_sums(dictionary)
    pairs = _pair_differences(dictionary)
    structural = _structural_differences(dictionary)

    branches = [
        _residual_branch("first Bianchi", cyclic, relations),
        _residual_branch("pair symmetry", pairs, relations),
        _residual_branch("structure equations", structural, relations),
    ]
    checked = list(cyclic.values()) + list(pairs.values())
    failing = random_assignment_oracle(checked, relations, assignments, seed)
    names = list(cyclic) + list(pairs)
    branches.append(CertificateBranch(
        label="random assignments",
        hypotheses=[f"{assignments} rational points, seed {seed}"],
        relations=[names[k] for k in failing],
        conclusion=(
            "all expressions vanish at every point" if not failing
            else "nonzero at some point"
        ),
        status=PASS if not failing else FAILED,
    ))

    certificate = CertificateModel(
        scenario="dictionary",
        dims={"p": p, "q": q},
        hypotheses=["total space Riemannian", "relations derived to order 1"],
        branches=branches,
        conclusion="curvature dictionary consistent",
    )
    if any(b.status != PASS for b in branches):
        certificate.status = FAILED
        certificate.conclusion = "curvature dictionary inconsistent"
    logger.info(f"Dictionary (p={p}, q={q}): {certificate.status}")
    return certificate


def scale_curvature_contraction(p: int, truncation: Optional[int] = None) -> Dict[str, object]:
    """
    Antisymmetric part of the reduced Ricci tensor of a codimension-1 Weyl submersion.

    Contracting S_ijkl on its first and third slots, S_[jl] must equal
    (p-2)/2 G_jl modulo the derived relations.

    Returns:
        {"p", "factor", "checked", "failures"}
    """
    geom = weyl_submersion_codim1(p, truncation)
    relations = derive_identities(geom, order=0)
    base = list(geom.vocabulary.classes["i"].values())
    factor = sympy.Rational(p - 2, 2)
    failures = []
    checked = 0
    for j, l in product(base, repeat=2):
        if j >= l:
            continue
        ric_jl = sum(geom.inv("S", i, j, i, l) for i in base)
        ric_lj = sum(geom.inv("S", i, l, i, j) for i in base)
        expr = HALF * (ric_jl - ric_lj) - factor * geom.inv("G", j, l)
        checked += 1
        if not relations.implies(expr):
            failures.append(f"S[[{j},{l}]]: {relations.normal_form(expr)}")
    if failures:
        logger.warning(f"Scale curvature contraction fails at p={p}: {failures[0]}")
    return {"p": p, "factor": str(factor), "checked": checked, "failures": failures}
