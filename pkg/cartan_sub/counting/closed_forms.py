"""Closed-form degree-of-freedom counts, exact and valid for symbolic dimensions."""
import logging
from typing import Callable, Dict, Optional, Tuple, Union
import sympy
from cartan_sub.core.errors import InvalidParametersError

logger = logging.getLogger(__name__)

Value = Union[int, sympy.Expr, Tuple[int, ...]]

p_sym, q_sym, n_sym = sympy.symbols("p q n", integer=True, nonnegative=True)


def _exact(value: sympy.Expr) -> Union[int, sympy.Expr]:
    value = sympy.simplify(value)
    return int(value) if value.is_Integer else value


def riem_sub_top(p, q):
    return q * (q - 1) / 2 + p


def riem_sub_s_p1(p, q):
    """Seeds whose last index is the first fibre index."""
    return q**2 * (q**2 - 1) / 12 + p * q * (q + 1) * (q + 2) / 6


def riem_sub_s_p(p, q):
    """Seeds whose last index is the last base index."""
    return (
        p * (p - 1) / 2
        + q**2 * (q**2 - 1) / 12
        - q * (q + 1) / 2
        + p * q * (q + 1) * (q + 2) / 2
    )


def riem_sub_s_p1_printed(p, q):
    return q**2 * (q**2 - 1) / 2 + p * q**2 * (q + 1) / 2


def riem_sub_s_p_printed(p, q):
    return p * (p - 1) / 2 + q * (q + 1) * (q**2 - q - 1 + p * (q + 2)) / 2


def riem_geom(n):
    return n * (n - 1) / 2


def weyl_geom(n):
    return (n + 2) * (n - 1) / 2


def riem_sub_deficit(p, q):
    """Riemannian degrees of freedom of the total space minus those of the submersion."""
    return riem_geom(p + q) - riem_sub_top(p, q)


def born_rigid_top(n):
    return n - 1


def weyl_sub_top(n):
    return n


FORMS: Dict[str, Tuple[Callable, Tuple[str, ...]]] = {
    "riem_sub_top": (riem_sub_top, ("p", "q")),
    "riem_sub_s_p1": (riem_sub_s_p1, ("p", "q")),
    "riem_sub_s_p": (riem_sub_s_p, ("p", "q")),
    "riem_sub_s_p1_printed": (riem_sub_s_p1_printed, ("p", "q")),
    "riem_sub_s_p_printed": (riem_sub_s_p_printed, ("p", "q")),
    "riem_geom": (riem_geom, ("n",)),
    "weyl_geom": (weyl_geom, ("n",)),
    "riem_sub_deficit": (riem_sub_deficit, ("p", "q")),
    "born_rigid_top": (born_rigid_top, ("n",)),
    "weyl_sub_top": (weyl_sub_top, ("n",)),
}

# Conformal equivalence of surfaces is involutive without prolongation
CONFORMAL_2D = (2, 0)


def dof_closed_forms(
    name: str,
    p: Optional[Union[int, sympy.Expr]] = None,
    q: Optional[Union[int, sympy.Expr]] = None,
    n: Optional[Union[int, sympy.Expr]] = None
) -> Value:
    """
    Evaluate a closed form exactly.

    Args:
        name: Formula name (see FORMS, plus conformal_2d)
        p, q, n: Integers, or sympy symbols for the symbolic formula

    Returns:
        int for concrete dimensions, sympy expression otherwise;
        (s_1, s_2) for conformal_2d
    """
    if name == "conformal_2d":
        return CONFORMAL_2D
    if name not in FORMS:
        logger.error(f"Unknown closed form '{name}'")
        known = ", ".join(sorted(FORMS))
        raise InvalidParametersError(name, f"unknown closed form; known: {known}")
    fn, names = FORMS[name]
    if names == ("n",) and n is None and p is not None:
        n = p + q if q is not None else p
    values = {"p": p, "q": q, "n": n}
    missing = [k for k in names if values[k] is None]
    if missing:
        raise InvalidParametersError(name, f"missing {', '.join(missing)}")
    if name.startswith("riem_sub_") and q is not None and not isinstance(q, sympy.Basic):
        if q == 0 and p:
            # with no fibre the top index is a base index
            raise InvalidParametersError(name, "the formula does not make sense for q=0")
    args = [sympy.Integer(values[k]) if isinstance(values[k], int) else values[k] for k in names]
    return _exact(fn(*args))


def symbolic(name: str) -> sympy.Expr:
    """Closed form as a polynomial in p, q or n."""
    _, names = FORMS[name]
    symbols = {"p": p_sym, "q": q_sym, "n": n_sym}
    return sympy.expand(FORMS[name][0](*(symbols[k] for k in names)))
