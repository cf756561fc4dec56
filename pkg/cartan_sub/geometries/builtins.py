"""Built-in structural-equation systems."""
import logging
from typing import Callable, Dict, Optional, Tuple
import sympy
from cartan_sub.config import settings
from cartan_sub.core.errors import InvalidParametersError, UnknownGeometryError
from cartan_sub.forms.algebra import HORIZONTAL, SCALE, VERTICAL, Coframe, FormExpr
from cartan_sub.geometries.system import GeometrySystem
from cartan_sub.invariants.symbols import (
    ANTISYM_PAIR,
    PAIR_ANTISYM,
    RIEMANN,
    IndexClass,
    SymmetrySpec,
    Vocabulary,
    swap,
)

logger = logging.getLogger(__name__)

HALF = sympy.Rational(1, 2)

# M[i,j,a] = -M[j,i,a]
FIRST_PAIR_ANTISYM = SymmetrySpec(3, (swap(3, 0, 1, -1),))
# K[i,a,b] = K[i,b,a]
LAST_PAIR_SYM = SymmetrySpec(3, (swap(3, 1, 2, 1),))
LAST_PAIR_ANTISYM = SymmetrySpec(3, (swap(3, 1, 2, -1),))


def _truncation(truncation: Optional[int]) -> int:
    return settings.truncation_order if truncation is None else truncation


def _pairs(values) -> list:
    values = list(values)
    return [(x, y) for k, x in enumerate(values) for y in values[k + 1:]]


def _require(name: str, condition: bool, message: str) -> None:
    if not condition:
        logger.error(f"Invalid parameters for {name}: {message}")
        raise InvalidParametersError(name, message)


def _rotation_square(geom: GeometrySystem, cls: IndexClass, x: int, y: int) -> FormExpr:
    """-sum_z rho[x,z] ^ rho[z,y], the flat part of d rho[x,y]."""
    form = FormExpr()
    for z in cls.values():
        form = form - geom.connection(cls.name, x, z) * geom.connection(cls.name, z, y)
    return form


def _rotate(
    geom: GeometrySystem,
    cls: IndexClass,
    x: int,
    target: Callable[[int], FormExpr]
) -> FormExpr:
    """-sum_y rho[x,y] ^ target(y)."""
    form = FormExpr()
    for y in cls.values():
        form = form - geom.connection(cls.name, x, y) * target(y)
    return form


def _curvature(
    geom: GeometrySystem,
    head: str,
    x: int,
    y: int,
    slot_class: IndexClass
) -> FormExpr:
    """1/2 sum_{u,v} head[x,y,u,v] e_u ^ e_v over the frame of a class."""
    form = FormExpr()
    for u in slot_class.values():
        for v in slot_class.values():
            coeff = geom.inv(head, x, y, u, v)
            if coeff != 0:
                form = form + geom.frame_form(u) * geom.frame_form(v) * (HALF * coeff)
    return form


def riemannian(n: int, truncation: Optional[int] = None) -> GeometrySystem:
    """Orthonormal frame bundle of an n-dimensional Riemannian space."""
    _require("Riemannian", n >= 2, "n must be at least 2")
    m = IndexClass("m", n, 0)
    vocabulary = Vocabulary([m], ["m"], _truncation(truncation))
    vocabulary.declare_head("R", ["m"] * 4, RIEMANN, description="Riemann tensor")
    coframe = Coframe()
    frame = {mu: coframe.add("omega", (mu,), HORIZONTAL) for mu in m.values()}
    for mu, nu in _pairs(m.values()):
        coframe.add("omega", (mu, nu), VERTICAL)
    geom = GeometrySystem(
        "Riemannian", {"n": n}, coframe, vocabulary, frame, {"m": "omega"},
        description="d omega_mu = -omega_mu_nu ^ omega_nu"
    )
    for mu in m.values():
        geom.set_rule(frame[mu], _rotate(geom, m, mu, geom.frame_form))
    for mu, nu in _pairs(m.values()):
        geom.set_rule(
            coframe.get("omega", mu, nu),
            _rotation_square(geom, m, mu, nu) + _curvature(geom, "R", mu, nu, m)
        )
    geom.validate()
    return geom


def weyl(n: int, truncation: Optional[int] = None) -> GeometrySystem:
    """Weyl geometry: conformal frames with a scale connection tau."""
    _require("Weyl", n >= 2, "scale curvature needs n >= 2")
    m = IndexClass("m", n, 0)
    vocabulary = Vocabulary([m], ["m"], _truncation(truncation))
    vocabulary.declare_head("F", ["m", "m"], ANTISYM_PAIR, weight=2, description="scale curvature")
    vocabulary.declare_head("R", ["m"] * 4, PAIR_ANTISYM, weight=2, description="Weyl curvature")
    coframe = Coframe()
    frame = {mu: coframe.add("omega", (mu,), HORIZONTAL) for mu in m.values()}
    for mu, nu in _pairs(m.values()):
        coframe.add("omega", (mu, nu), VERTICAL)
    tau = coframe.add("tau", (), SCALE)
    geom = GeometrySystem(
        "Weyl", {"n": n}, coframe, vocabulary, frame, {"m": "omega"}, scale=tau,
        description="d omega_mu = -omega_mu_nu ^ omega_nu - tau ^ omega_mu"
    )
    tau_form = FormExpr.generator(tau)
    for mu in m.values():
        rotated = _rotate(geom, m, mu, geom.frame_form)
        geom.set_rule(frame[mu], rotated - tau_form * geom.frame_form(mu))
    for mu, nu in _pairs(m.values()):
        geom.set_rule(
            coframe.get("omega", mu, nu),
            _rotation_square(geom, m, mu, nu) + _curvature(geom, "R", mu, nu, m)
        )
    scale_curvature = FormExpr()
    for mu in m.values():
        for nu in m.values():
            coeff = geom.inv("F", mu, nu)
            if coeff != 0:
                pair = geom.frame_form(mu) * geom.frame_form(nu)
                scale_curvature = scale_curvature + pair * (HALF * coeff)
    geom.set_rule(tau, scale_curvature)
    geom.validate()
    return geom


def riemannian_submersion(p: int, q: int, truncation: Optional[int] = None) -> GeometrySystem:
    """Reduced structural equations of a Riemannian submersion.

    pi_i live on the base, omega_a on the fibres; M is the vorticity-like
    gluing invariant and K the second-fundamental-form-like one.
    """
    _require("RiemannianSubmersion", p >= 1 and q >= 1, "p and q must be at least 1")
    base = IndexClass("i", p, 0)
    fibre = IndexClass("a", q, p)
    vocabulary = Vocabulary([base, fibre], ["i", "a"], _truncation(truncation))
    vocabulary.declare_head("M", ["i", "i", "a"], FIRST_PAIR_ANTISYM, description="M_ija")
    vocabulary.declare_head("K", ["i", "a", "a"], LAST_PAIR_SYM, description="K_iab")
    vocabulary.declare_head("S_base", ["i"] * 4, RIEMANN, description="base curvature")
    vocabulary.declare_head("S_fibre", ["a"] * 4, RIEMANN, description="fibre curvature")

    coframe = Coframe()
    frame = {}
    for i in base.values():
        frame[i] = coframe.add("pi", (i,), HORIZONTAL)
    for a in fibre.values():
        frame[a] = coframe.add("omega", (a,), HORIZONTAL)
    for i, j in _pairs(base.values()):
        coframe.add("pi", (i, j), VERTICAL)
    for a, b in _pairs(fibre.values()):
        coframe.add("omega", (a, b), VERTICAL)
    geom = GeometrySystem(
        "RiemannianSubmersion", {"p": p, "q": q}, coframe, vocabulary, frame,
        {"i": "pi", "a": "omega"},
        description="d pi_i = -pi_ij ^ pi_j"
    )
    pi = geom.frame_form
    omega = geom.frame_form

    for i in base.values():
        geom.set_rule(frame[i], _rotate(geom, base, i, pi))

    for a in fibre.values():
        rule = _rotate(geom, fibre, a, omega)
        for i in base.values():
            for b in fibre.values():
                rule = rule - omega(b) * pi(i) * geom.inv("K", i, a, b)
            for j in base.values():
                rule = rule - pi(i) * pi(j) * geom.inv("M", i, j, a)
        geom.set_rule(frame[a], rule)

    for i, j in _pairs(base.values()):
        geom.set_rule(
            coframe.get("pi", i, j),
            _rotation_square(geom, base, i, j) + _curvature(geom, "S_base", i, j, base)
        )

    for a, b in _pairs(fibre.values()):
        rule = _rotation_square(geom, fibre, a, b) + _curvature(geom, "S_fibre", a, b, fibre)
        for c in fibre.values():
            for i in base.values():
                rule = rule + omega(c) * pi(i) * mixed_fibre_curvature(geom, a, b, c, i)
        for i in base.values():
            for j in base.values():
                rule = rule + pi(i) * pi(j) * (HALF * base_fibre_curvature(geom, a, b, i, j))
        geom.set_rule(coframe.get("omega", a, b), rule)

    geom.validate()
    return geom


def mixed_fibre_curvature(geom: GeometrySystem, a: int, b: int, c: int, i: int) -> sympy.Expr:
    """A_abci = -(K_ica;b - K_icb;a)."""
    return -(geom.inv("K", i, c, a, derivs=(b,)) - geom.inv("K", i, c, b, derivs=(a,)))


def base_fibre_curvature(geom: GeometrySystem, a: int, b: int, i: int, j: int) -> sympy.Expr:
    """A_abij = -(M_ija;b - M_ijb;a) - K_iac K_jbc + K_ibc K_jac."""
    value = -(geom.inv("M", i, j, a, derivs=(b,)) - geom.inv("M", i, j, b, derivs=(a,)))
    fibre = geom.vocabulary.classes["a"]
    for c in fibre.values():
        value += -geom.inv("K", i, a, c) * geom.inv("K", j, b, c)
        value += geom.inv("K", i, b, c) * geom.inv("K", j, a, c)
    return sympy.expand(value)


def _flow_frame(p: int, truncation: Optional[int]):
    base = IndexClass("i", p, 0)
    time = IndexClass("0", 1, p)
    vocabulary = Vocabulary([base, time], ["i", "0"], _truncation(truncation))
    return base, time, vocabulary


def born_rigid(n: int, truncation: Optional[int] = None) -> GeometrySystem:
    """Born rigid flow: codimension-1 Riemannian submersion along a unit flow."""
    _require("BornRigid", n >= 2, "n must be at least 2")
    p = n - 1
    base, time, vocabulary = _flow_frame(p, truncation)
    vocabulary.declare_head("M", ["i", "i"], ANTISYM_PAIR, description="vorticity")
    vocabulary.declare_head("K", ["i"], description="acceleration")
    vocabulary.declare_head("S", ["i"] * 4, RIEMANN, description="curvature of the quotient")

    coframe = Coframe()
    frame = {i: coframe.add("omega", (i,), HORIZONTAL) for i in base.values()}
    t = time.maximum
    frame[t] = coframe.add("omega0", (), HORIZONTAL)
    for i, j in _pairs(base.values()):
        coframe.add("pi", (i, j), VERTICAL)
    geom = GeometrySystem(
        "BornRigid", {"n": n}, coframe, vocabulary, frame, {"i": "pi"},
        description="d omega_0 = -K_i omega_0 ^ omega_i - M_ij omega_i ^ omega_j"
    )
    w = geom.frame_form
    for i in base.values():
        geom.set_rule(frame[i], _rotate(geom, base, i, w))
    geom.set_rule(frame[t], _flow_rule(geom, base, t))
    for i, j in _pairs(base.values()):
        geom.set_rule(
            coframe.get("pi", i, j),
            _rotation_square(geom, base, i, j) + _curvature(geom, "S", i, j, base)
        )
    geom.validate()
    return geom


def _flow_rule(geom: GeometrySystem, base: IndexClass, t: int) -> FormExpr:
    """-K_i omega_0 ^ omega_i - M_ij omega_i ^ omega_j."""
    w = geom.frame_form
    rule = FormExpr()
    for i in base.values():
        rule = rule - w(t) * w(i) * geom.inv("K", i)
        for j in base.values():
            rule = rule - w(i) * w(j) * geom.inv("M", i, j)
    return rule


def weyl_submersion_codim1(p: int, truncation: Optional[int] = None) -> GeometrySystem:
    """Codimension-1 Weyl submersion with reduced scale form varpi.

    E0 is the expansion scalar relating the total scale connection to the
    reduced one, tau = varpi + E0 omega_0.
    """
    _require("WeylSubmersionCodim1", p >= 1, "p must be at least 1")
    base, time, vocabulary = _flow_frame(p, truncation)
    vocabulary.declare_head("M", ["i", "i"], ANTISYM_PAIR, weight=1, description="vorticity")
    vocabulary.declare_head("K", ["i"], weight=1, description="acceleration")
    vocabulary.declare_head(
        "S", ["i"] * 4, PAIR_ANTISYM, weight=2, description="reduced Weyl curvature"
    )
    vocabulary.declare_head(
        "G", ["i", "i"], ANTISYM_PAIR, weight=2, description="reduced scale curvature"
    )
    vocabulary.declare_head("E0", [], weight=1, description="expansion")

    coframe = Coframe()
    frame = {i: coframe.add("omega", (i,), HORIZONTAL) for i in base.values()}
    t = time.maximum
    frame[t] = coframe.add("omega0", (), HORIZONTAL)
    for i, j in _pairs(base.values()):
        coframe.add("pi", (i, j), VERTICAL)
    varpi = coframe.add("varpi", (), SCALE)
    geom = GeometrySystem(
        "WeylSubmersionCodim1", {"p": p}, coframe, vocabulary, frame, {"i": "pi"}, scale=varpi,
        description="d omega_0 = -K_i omega_0 ^ omega_i - M_ij omega_i ^ omega_j - varpi ^ omega_0"
    )
    w = geom.frame_form
    scale = FormExpr.generator(varpi)
    for i in base.values():
        geom.set_rule(frame[i], _rotate(geom, base, i, w) - scale * w(i))
    geom.set_rule(frame[t], _flow_rule(geom, base, t) - scale * w(t))
    for i, j in _pairs(base.values()):
        geom.set_rule(
            coframe.get("pi", i, j),
            _rotation_square(geom, base, i, j) + _curvature(geom, "S", i, j, base)
        )
    scale_curvature = FormExpr()
    for i in base.values():
        for j in base.values():
            coeff = geom.inv("G", i, j)
            if coeff != 0:
                scale_curvature = scale_curvature + w(i) * w(j) * (HALF * coeff)
    geom.set_rule(varpi, scale_curvature)
    geom.validate()
    return geom


def galilean_rigid(n: int, truncation: Optional[int] = None) -> GeometrySystem:
    """Galilean structure reduced along a rigid motion.

    dtau = 0 guarantees absolute time. Boost mixing of the time derivative
    index is not modelled, so only horizontal parts of d^2 are checked.
    """
    _require("GalileanRigid", n >= 2, "n must be at least 2")
    base = IndexClass("i", n, 0)
    time = IndexClass("0", 1, n)
    vocabulary = Vocabulary([base, time], ["i", "0"], _truncation(truncation))
    vocabulary.declare_head("Gamma", ["i", "i"], description="Gamma_ij, symmetric by relation")
    vocabulary.declare_head("Gamma3", ["i"] * 3, LAST_PAIR_ANTISYM, description="Gamma_ijk")

    coframe = Coframe()
    frame = {i: coframe.add("theta", (i,), HORIZONTAL) for i in base.values()}
    t = time.maximum
    tau = coframe.add("tau", (), HORIZONTAL)
    frame[t] = tau
    for i in base.values():
        coframe.add("omega", (i,), VERTICAL)
    for i, j in _pairs(base.values()):
        coframe.add("omega", (i, j), VERTICAL)
    geom = GeometrySystem(
        "GalileanRigid", {"n": n}, coframe, vocabulary, frame, {"i": "omega"},
        check_vertical=False,
        description="d tau = 0, d theta_i = -omega_i ^ tau - omega_ij ^ theta_j"
    )
    theta = geom.frame_form
    boost = lambda i: geom.form("omega", i)
    tau_form = FormExpr.generator(tau)

    geom.set_rule(tau, FormExpr())
    for i in base.values():
        geom.set_rule(frame[i], -boost(i) * tau_form + _rotate(geom, base, i, theta))
        rule = _rotate(geom, base, i, boost)
        for j in base.values():
            rule = rule + theta(j) * tau_form * geom.inv("Gamma", i, j)
            for k in base.values():
                coeff = geom.inv("Gamma3", i, j, k)
                if coeff != 0:
                    rule = rule + theta(j) * theta(k) * (HALF * coeff)
        geom.set_rule(coframe.get("omega", i), rule)
    for i, j in _pairs(base.values()):
        geom.set_rule(coframe.get("omega", i, j), _rotation_square(geom, base, i, j))

    for i, j in _pairs(base.values()):
        geom.add_relation(geom.inv("Gamma", i, j) - geom.inv("Gamma", j, i), "defining")
    values = list(base.values())
    for x, i in enumerate(values):
        for y, j in enumerate(values[x + 1:], start=x + 1):
            for k in values[y + 1:]:
                geom.add_relation(
                    geom.inv("Gamma3", i, j, k)
                    + geom.inv("Gamma3", j, k, i)
                    + geom.inv("Gamma3", k, i, j),
                    "defining"
                )
    geom.validate()
    return geom


def shear_free_flow(n: int, truncation: Optional[int] = None) -> GeometrySystem:
    """Total Riemannian space in a frame adapted to a shear-free unit flow.

    omega_i0 = -K_i omega_0 + M_ij omega_j + E omega_i is not a generator;
    R and R0 (= R_ijk0) are the total-space curvature components.
    """
    _require("ShearFreeFlow", n >= 2, "n must be at least 2")
    p = n - 1
    base, time, vocabulary = _flow_frame(p, truncation)
    vocabulary.declare_head("M", ["i", "i"], ANTISYM_PAIR, description="vorticity")
    vocabulary.declare_head("K", ["i"], description="acceleration")
    vocabulary.declare_head("E", [], description="expansion")
    vocabulary.declare_head("R", ["i"] * 4, RIEMANN, description="R_ijkl")
    vocabulary.declare_head("R0", ["i"] * 3, FIRST_PAIR_ANTISYM, description="R_ijk0")

    coframe = Coframe()
    frame = {i: coframe.add("omega", (i,), HORIZONTAL) for i in base.values()}
    t = time.maximum
    frame[t] = coframe.add("omega0", (), HORIZONTAL)
    for i, j in _pairs(base.values()):
        coframe.add("omega", (i, j), VERTICAL)
    geom = GeometrySystem(
        "ShearFreeFlow", {"n": n}, coframe, vocabulary, frame, {"i": "omega"},
        description="omega_i0 = -K_i omega_0 + M_ij omega_j + E omega_i"
    )
    w = geom.frame_form
    tilt = {i: flow_connection(geom, i) for i in base.values()}

    geom.set_rule(frame[t], sum((tilt[i] * w(i) for i in base.values()), FormExpr()))
    for i in base.values():
        geom.set_rule(frame[i], _rotate(geom, base, i, w) - tilt[i] * w(t))
    for i, j in _pairs(base.values()):
        rule = _rotation_square(geom, base, i, j) + tilt[i] * tilt[j]
        rule = rule + _curvature(geom, "R", i, j, base)
        for k in base.values():
            coeff = geom.inv("R0", i, j, k)
            if coeff != 0:
                rule = rule + w(k) * w(t) * coeff
        geom.set_rule(coframe.get("omega", i, j), rule)
    geom.validate()
    return geom


def flow_connection(geom: GeometrySystem, i: int) -> FormExpr:
    """omega_i0 = -K_i omega_0 + M_ij omega_j + E omega_i."""
    base = geom.vocabulary.classes["i"]
    t = geom.vocabulary.classes["0"].maximum
    w = geom.frame_form
    form = -w(t) * geom.inv("K", i) + w(i) * geom.inv("E")
    for j in base.values():
        form = form + w(j) * geom.inv("M", i, j)
    return form


def riemannian_split(p: int, q: int, truncation: Optional[int] = None) -> GeometrySystem:
    """Total Riemannian space before the bundle reduction.

    omega_ia = M_ija omega_j - K_iab omega_b with M and K unconstrained; the
    curvature blocks R_base and R_fibre have two total-space slots. Meant for
    Lie derivatives of the horizontal forms: the first pair of a curvature
    block only rotates within its own class.
    """
    _require("RiemannianSplit", p >= 1 and q >= 1, "p and q must be at least 1")
    base = IndexClass("i", p, 0)
    fibre = IndexClass("a", q, p)
    total = IndexClass("m", p + q, 0)
    vocabulary = Vocabulary([base, fibre, total], ["i", "a"], _truncation(truncation))
    vocabulary.declare_head("M", ["i", "i", "a"], description="M_ija, unconstrained")
    vocabulary.declare_head("K", ["i", "a", "a"], description="K_iab, unconstrained")
    vocabulary.declare_head("R_base", ["i", "i", "m", "m"], PAIR_ANTISYM, description="R_ij..")
    vocabulary.declare_head("R_fibre", ["a", "a", "m", "m"], PAIR_ANTISYM, description="R_ab..")

    coframe = Coframe()
    frame = {mu: coframe.add("omega", (mu,), HORIZONTAL) for mu in total.values()}
    for i, j in _pairs(base.values()):
        coframe.add("omega", (i, j), VERTICAL)
    for a, b in _pairs(fibre.values()):
        coframe.add("omega", (a, b), VERTICAL)
    geom = GeometrySystem(
        "RiemannianSplit", {"p": p, "q": q}, coframe, vocabulary, frame,
        {"i": "omega", "a": "omega", "m": "omega"},
        description="omega_ia = M_ija omega_j - K_iab omega_b"
    )
    w = geom.frame_form
    for i in base.values():
        for a in fibre.values():
            form = FormExpr()
            for j in base.values():
                form = form + w(j) * geom.inv("M", i, j, a)
            for b in fibre.values():
                form = form - w(b) * geom.inv("K", i, a, b)
            geom.set_dependent("omega", i, a, form)

    mixed = lambda x, y: geom.connection("m", x, y)
    for i in base.values():
        rule = _rotate(geom, base, i, w)
        for a in fibre.values():
            rule = rule - mixed(i, a) * w(a)
        geom.set_rule(frame[i], rule)
    for a in fibre.values():
        rule = _rotate(geom, fibre, a, w)
        for i in base.values():
            rule = rule - mixed(a, i) * w(i)
        geom.set_rule(frame[a], rule)
    for i, j in _pairs(base.values()):
        rule = _rotation_square(geom, base, i, j) + _curvature(geom, "R_base", i, j, total)
        for a in fibre.values():
            rule = rule - mixed(i, a) * mixed(a, j)
        geom.set_rule(coframe.get("omega", i, j), rule)
    for a, b in _pairs(fibre.values()):
        rule = _rotation_square(geom, fibre, a, b) + _curvature(geom, "R_fibre", a, b, total)
        for i in base.values():
            rule = rule - mixed(a, i) * mixed(i, b)
        geom.set_rule(coframe.get("omega", a, b), rule)
    geom.validate()
    return geom


Factory = Tuple[Callable[..., GeometrySystem], Tuple[str, ...]]

BUILTINS: Dict[str, Factory] = {
    "Riemannian": (riemannian, ("n",)),
    "Weyl": (weyl, ("n",)),
    "RiemannianSubmersion": (riemannian_submersion, ("p", "q")),
    "WeylSubmersionCodim1": (weyl_submersion_codim1, ("p",)),
    "BornRigid": (born_rigid, ("n",)),
    "GalileanRigid": (galilean_rigid, ("n",)),
    "ShearFreeFlow": (shear_free_flow, ("n",)),
    "RiemannianSplit": (riemannian_split, ("p", "q")),
}

ALIASES: Dict[str, str] = {
    "riemannian": "Riemannian",
    "riem": "Riemannian",
    "weyl": "Weyl",
    "riemsub": "RiemannianSubmersion",
    "riemanniansubmersion": "RiemannianSubmersion",
    "weylsub": "WeylSubmersionCodim1",
    "weylsubmersioncodim1": "WeylSubmersionCodim1",
    "bornrigid": "BornRigid",
    "born": "BornRigid",
    "galilean": "GalileanRigid",
    "galileanrigid": "GalileanRigid",
    "shearfree": "ShearFreeFlow",
    "shearfreeflow": "ShearFreeFlow",
    "riemsplit": "RiemannianSplit",
    "riemanniansplit": "RiemannianSplit",
}


def resolve_name(name: str) -> str:
    """Canonical built-in name for a name or CLI alias (riem-sub, born-rigid, ...)."""
    if name in BUILTINS:
        return name
    key = name.replace("-", "").replace("_", "").lower()
    if key in ALIASES:
        return ALIASES[key]
    raise UnknownGeometryError(name)


def parameter_names(name: str) -> Tuple[str, ...]:
    return BUILTINS[resolve_name(name)][1]


def builtin(
    name: str,
    params: Optional[Dict[str, int]] = None,
    truncation: Optional[int] = None,
    **kwargs: int
) -> GeometrySystem:
    """
    Construct a built-in geometry.

    Args:
        name: Built-in name or alias
        params: Dimension parameters, e.g. {"p": 2, "q": 2}
        truncation: Derivative truncation order (settings default)
        **kwargs: Parameters given as keywords

    Returns:
        GeometrySystem at concrete dimensions
    """
    canonical = resolve_name(name)
    factory, names = BUILTINS[canonical]
    values = dict(params or {})
    values.update(kwargs)
    # codimension-1 flows also accept the total dimension
    if names == ("p",) and "p" not in values and "n" in values:
        values["p"] = values["n"] - 1
    if names == ("n",) and "n" not in values and "p" in values:
        values["n"] = values["p"] + 1
    missing = [k for k in names if values.get(k) is None]
    if missing:
        raise InvalidParametersError(canonical, f"missing {', '.join(missing)}")
    args = [int(values[k]) for k in names]
    logger.debug(f"Building {canonical}{tuple(args)}")
    return factory(*args, truncation=truncation)
