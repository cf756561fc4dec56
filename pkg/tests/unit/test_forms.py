"""Unit tests for the exterior algebra."""
import pytest
import sympy
from cartan_sub.forms import (
    HORIZONTAL,
    SCALE,
    VERTICAL,
    Coframe,
    CoframeGenerator,
    FormExpr,
    SymmetricProduct,
    VectorField,
    apply_derivation,
    exterior_d,
    extract_coefficients,
    horizontal_part,
    interior,
    lie_derivative,
    lie_derivative_function,
    vertical_part,
    wedge,
    wedge_all,
)

pytestmark = pytest.mark.unit


@pytest.fixture
def coframe():
    """pi[1], pi[2] horizontal, omega[3] horizontal, pi[1,2] vertical, tau scale."""
    frame = Coframe()
    frame.add("pi", (1,))
    frame.add("pi", (2,))
    frame.add("omega", (3,))
    frame.add("pi", (1, 2), VERTICAL)
    frame.add("tau", (), SCALE)
    return frame


def test_generator_names(coframe):
    """Test generator naming and kinds."""
    assert coframe.get("pi", 1).name == "pi[1]"
    assert coframe.get("tau").name == "tau"
    assert coframe.get("pi", 1).is_horizontal
    assert not coframe.get("pi", 1, 2).is_horizontal


def test_unknown_kind():
    """Test generator kinds are validated."""
    with pytest.raises(ValueError):
        CoframeGenerator("pi", (1,), "diagonal")


def test_coframe_duplicates(coframe):
    """Test a generator cannot be declared twice."""
    with pytest.raises(ValueError):
        coframe.add("pi", (1,))


def test_coframe_mixed_kinds(coframe):
    """Test one family and arity keeps a single kind."""
    with pytest.raises(ValueError):
        coframe.add("pi", (3,), VERTICAL)


def test_coframe_lookup(coframe):
    """Test lookup helpers."""
    assert len(coframe) == 5
    assert coframe.has("omega", 3)
    assert not coframe.has("omega", 4)
    assert coframe.by_name("pi[1,2]") == coframe.get("pi", 1, 2)
    assert coframe.families == ["pi", "omega", "tau"]
    assert [g.name for g in coframe.of_kind(VERTICAL)] == ["pi[1,2]"]
    with pytest.raises(KeyError):
        coframe.get("pi", 7)


def test_antisymmetric_components(coframe):
    """Test signed access to antisymmetric families."""
    assert coframe.antisymmetric("pi", 2, 1) == -coframe.form("pi", 1, 2)
    assert coframe.antisymmetric("pi", 1, 1).is_zero()


def test_wedge_anticommutes(coframe):
    """Test a ^ b = -b ^ a and a ^ a = 0 for one-forms."""
    a, b = coframe.form("pi", 1), coframe.form("pi", 2)

    assert wedge(a, b) == -wedge(b, a)
    assert (a ^ a).is_zero()
    assert (a ^ b).grade == 2


def test_coefficient_in_any_order(coframe):
    """Test coefficients of reordered monomials carry the sign."""
    x = sympy.Symbol("x")
    pi1, pi2 = coframe.get("pi", 1), coframe.get("pi", 2)
    form = FormExpr.from_terms([(x, (pi2, pi1))])

    assert form.coefficient(pi1, pi2) == -x
    assert form.coefficient(pi2, pi1) == x
    assert form.coefficient(pi1, pi1) == 0


def test_scalar_multiplication(coframe):
    """Test scalars scale and forms wedge under *."""
    x = sympy.Symbol("x")
    a, b = coframe.form("pi", 1), coframe.form("pi", 2)

    assert (a * x).coefficient(coframe.get("pi", 1)) == x
    assert (2 * a).coefficient(coframe.get("pi", 1)) == 2
    assert a * b == wedge(a, b)


def test_mixed_grades_rejected(coframe):
    """Test forms of different grades cannot be added."""
    with pytest.raises(ValueError):
        coframe.form("pi", 1) + FormExpr.scalar(1)


def test_zero_comparison(coframe):
    """Test comparison with the integer zero."""
    a = coframe.form("pi", 1)

    assert a - a == 0
    assert FormExpr.zero() == 0
    assert FormExpr.zero().grade == 0


def test_wedge_all_associative(coframe):
    """Test iterated wedges agree with nested wedges."""
    a, b, c = coframe.form("pi", 1), coframe.form("pi", 2), coframe.form("omega", 3)

    assert wedge_all(a, b, c) == wedge(a, wedge(b, c))
    assert wedge_all(a, b, c).grade == 3


def test_interior_antiderivation(coframe):
    """Test I_V(a ^ b) = V(a) b - V(b) a."""
    a, b = coframe.form("pi", 1), coframe.form("pi", 2)
    pi1, pi2 = coframe.get("pi", 1), coframe.get("pi", 2)
    u, v = sympy.symbols("u v")
    vector = VectorField({pi1: u, pi2: v})

    assert interior(vector, wedge(a, b)) == b * u - a * v
    assert interior(vector, a).coefficient() == u


def test_horizontal_and_vertical_parts(coframe):
    """Test splitting by generator kind."""
    form = (coframe.form("pi", 1) ^ coframe.form("pi", 2)) + (
        coframe.form("pi", 1) ^ coframe.form("pi", 1, 2)
    )

    assert horizontal_part(form) == coframe.form("pi", 1) ^ coframe.form("pi", 2)
    assert vertical_part(form) == coframe.form("pi", 1) ^ coframe.form("pi", 1, 2)
    assert horizontal_part(form) + vertical_part(form) == form


def test_extract_coefficients_with_basis(coframe):
    """Test every basis monomial is listed."""
    pi1, pi2, om3 = coframe.get("pi", 1), coframe.get("pi", 2), coframe.get("omega", 3)
    form = coframe.form("pi", 1) ^ coframe.form("pi", 2)
    coefficients = extract_coefficients(form, [(pi1, pi2), (pi1, om3)])

    assert coefficients[(pi1, pi2)] == 1
    assert coefficients[(pi1, om3)] == 0


def test_subs(coframe):
    """Test coefficient substitution."""
    x = sympy.Symbol("x")
    form = coframe.form("pi", 1) * x

    assert form.subs({x: 3}).coefficient(coframe.get("pi", 1)) == 3


def test_apply_derivation(coframe):
    """Test a derivation acts on symbols and generators by Leibniz."""
    x = sympy.Symbol("x")
    pi1, pi2 = coframe.get("pi", 1), coframe.get("pi", 2)
    form = coframe.form("pi", 1) * x ** 2
    images = {pi1: coframe.form("pi", 2)}
    result = apply_derivation(form, images, {x: sympy.Integer(1)})

    assert result.coefficient(pi1) == 2 * x
    assert result.coefficient(pi2) == x ** 2


def test_apply_derivation_missing_image(coframe):
    """Test strict mode rejects symbols without an image."""
    x = sympy.Symbol("x")
    with pytest.raises(KeyError):
        apply_derivation(coframe.form("pi", 1) * x, {}, {}, default_zero=False)


def test_symmetric_product_commutes(coframe):
    """Test a.b = b.a for symmetric products."""
    a, b = coframe.form("pi", 1), coframe.form("pi", 2)

    assert (SymmetricProduct.product(a, b) - SymmetricProduct.product(b, a)).is_zero()
    assert not SymmetricProduct.product(a, b).is_zero()


def test_symmetric_square_sum(coframe):
    """Test the metric sum of squares expands from products."""
    pi1, pi2 = coframe.get("pi", 1), coframe.get("pi", 2)
    metric = SymmetricProduct.square_sum([pi1, pi2])
    square = lambda k: SymmetricProduct.product(coframe.form("pi", k), coframe.form("pi", k))
    expanded = square(1) + square(2)

    assert (metric - expanded).is_zero()
    assert (metric * 0).is_zero()


def test_symmetric_product_requires_one_forms(coframe):
    """Test two-forms are rejected."""
    two_form = coframe.form("pi", 1) ^ coframe.form("pi", 2)
    with pytest.raises(ValueError):
        SymmetricProduct.product(two_form)


@pytest.fixture
def riemannian_3():
    """Riemannian geometry in dimension 3."""
    from cartan_sub.geometries import builtin
    return builtin("Riemannian", {"n": 3})


def test_exterior_d_of_generators(riemannian_3):
    """Test d of a generator is its structure equation."""
    for gen in riemannian_3.coframe:
        assert exterior_d(FormExpr.generator(gen), riemannian_3) == riemannian_3.d_rule(gen)


def test_exterior_d_constant_coefficient(riemannian_3):
    """Test constant coefficients pass through d."""
    gen = riemannian_3.frame[1]

    assert exterior_d(FormExpr.generator(gen, 3), riemannian_3) == riemannian_3.d_rule(gen) * 3


def test_lie_derivative_cartan_formula(riemannian_3):
    """Test L_V omega[1] = V _| d omega[1] for a constant frame field."""
    gen = riemannian_3.frame[1]
    vector = VectorField({gen: 1})

    result = lie_derivative(vector, FormExpr.generator(gen), riemannian_3)

    assert result == interior(vector, riemannian_3.d_rule(gen))


def test_lie_derivative_function(riemannian_3):
    """Test a horizontal frame field differentiates invariants covariantly."""
    vector = VectorField({riemannian_3.frame[1]: 1})
    sym = next(iter(riemannian_3.inv("R", 1, 2, 1, 2).free_symbols))

    expected = riemannian_3.vocabulary.derivative(sym, 1)
    assert lie_derivative_function(vector, sym, riemannian_3) == expected
    assert lie_derivative_function(vector, sympy.Integer(5), riemannian_3) == 0
