"""Symmetrized tensor products of one-forms, e.g. sum_i omega_i (x) omega_i."""
from typing import Any, Dict, Iterable, Tuple
import sympy
from sympy import Expr
from cartan_sub.forms.algebra import CoframeGenerator, FormExpr, VectorField
from cartan_sub.forms.exterior import lie_derivative, lie_derivative_function

Factors = Tuple[CoframeGenerator, ...]


def _key(gens: Iterable[CoframeGenerator]) -> Factors:
    return tuple(sorted(gens, key=lambda g: g.position))


class SymmetricProduct:
    """Commutative products of one-forms with invariant coefficients.

    Only what the Lie-derivative computations need: sums, scaling, products
    of one-forms and L_V.
    """

    def __init__(self, terms: Dict[Factors, Expr] = None):
        self.terms: Dict[Factors, Expr] = {}
        for factors, coeff in (terms or {}).items():
            self._accumulate(factors, coeff)
        self._prune()

    def _accumulate(self, factors: Iterable[CoframeGenerator], coeff: Expr) -> None:
        key = _key(factors)
        self.terms[key] = self.terms.get(key, 0) + coeff

    def _prune(self) -> None:
        for key in list(self.terms):
            value = sympy.expand(self.terms[key])
            if value == 0:
                del self.terms[key]
            else:
                self.terms[key] = value

    @classmethod
    def product(cls, *forms: FormExpr) -> "SymmetricProduct":
        """Symmetrized product of one-forms."""
        result = cls({(): sympy.Integer(1)})
        for form in forms:
            if not form.is_zero() and form.grade != 1:
                raise ValueError("Symmetric products take one-forms")
            updated = cls()
            for factors, coeff in result.terms.items():
                for wedge_term, c in form.items():
                    updated._accumulate(factors + wedge_term, coeff * c)
            updated._prune()
            result = updated
        return result

    @classmethod
    def square_sum(cls, gens: Iterable[CoframeGenerator]) -> "SymmetricProduct":
        """sum_g g (x) g."""
        return cls({(g, g): sympy.Integer(1) for g in gens})

    def __add__(self, other: "SymmetricProduct") -> "SymmetricProduct":
        result = SymmetricProduct(dict(self.terms))
        for factors, coeff in other.terms.items():
            result._accumulate(factors, coeff)
        result._prune()
        return result

    def __neg__(self) -> "SymmetricProduct":
        return SymmetricProduct({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "SymmetricProduct") -> "SymmetricProduct":
        return self + (-other)

    def __mul__(self, scalar) -> "SymmetricProduct":
        value = sympy.sympify(scalar)
        return SymmetricProduct({k: v * value for k, v in self.terms.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def map_coefficients(self, fn) -> "SymmetricProduct":
        return SymmetricProduct({k: fn(v) for k, v in self.terms.items()})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({c})*{'.'.join(g.name for g in k) or '1'}" for k, c in self.terms.items()
        )


def lie_derivative_symmetric(
    vector: VectorField,
    tensor: SymmetricProduct,
    geom: Any
) -> SymmetricProduct:
    """L_V by the product rule on each factor."""
    result = SymmetricProduct()
    for factors, coeff in tensor.terms.items():
        scalar = lie_derivative_function(vector, coeff, geom)
        if scalar != 0:
            result = result + SymmetricProduct({factors: scalar})
        for r, gen in enumerate(factors):
            image = lie_derivative(vector, FormExpr.generator(gen), geom)
            if image.is_zero():
                continue
            rest = [FormExpr.generator(g) for g in factors[:r] + factors[r + 1:]]
            result = result + SymmetricProduct.product(image, *rest) * coeff
    return result
