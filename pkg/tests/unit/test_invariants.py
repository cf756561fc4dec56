"""Unit tests for indexed invariants, canonical forms and reduction."""
import pytest
import sympy
from cartan_sub.core.errors import (
    IndexClassMismatchError,
    TruncationError,
    UndeclaredInvariantError,
)
from cartan_sub.invariants import (
    ANTISYM_PAIR,
    RIEMANN,
    SYM_PAIR,
    IndexClass,
    Reducer,
    SymmetrySpec,
    Vocabulary,
    canonicalize,
    is_independent,
    monomial_terms,
    seed_form,
    swap,
)

pytestmark = pytest.mark.unit


@pytest.fixture
def vocabulary():
    """Base class i = {1, 2}, fibre class a = {3, 4}."""
    vocab = Vocabulary([IndexClass("i", 2), IndexClass("a", 2, offset=2)], truncation=2)
    vocab.declare_head("M", ["i", "i", "a"], SymmetrySpec(3, (swap(3, 0, 1, -1),)))
    vocab.declare_head("S", ["i", "i"], SYM_PAIR)
    vocab.declare_head("R", ["i", "i", "i", "i"], RIEMANN, weight=2)
    return vocab


def test_index_class_values():
    """Test concrete classes occupy offset+1 .. offset+extent."""
    fibre = IndexClass("a", 3, offset=2)

    assert list(fibre.values()) == [3, 4, 5]
    assert fibre.maximum == 5
    assert fibre.contains(3)
    assert not fibre.contains(2)


def test_index_class_negative_extent():
    """Test negative extents are rejected."""
    with pytest.raises(ValueError):
        IndexClass("i", -1)


def test_symmetry_groups():
    """Test closure of the standard symmetry generators."""
    assert len(ANTISYM_PAIR.group()) == 2
    assert len(RIEMANN.group()) == 8
    assert not RIEMANN.degenerate


def test_degenerate_symmetry():
    """Test a group reaching the identity with sign -1 is flagged."""
    spec = SymmetrySpec(2, (swap(2, 0, 1, -1), swap(2, 0, 1, 1)))

    assert spec.degenerate


def test_orbit_annihilates_repeated_antisymmetric_indices():
    """Test a tuple reached with both signs maps to 0."""
    orbit = ANTISYM_PAIR.orbit((1, 1))

    assert orbit == {(1, 1): 0}


def test_declared_heads(vocabulary):
    """Test heads and symbols are exposed in declaration order."""
    assert vocabulary.heads == ["M", "S", "R"]
    assert [s.head for s in vocabulary.symbols] == ["M", "S", "R"]
    assert vocabulary.has("M")
    assert not vocabulary.has("K")


def test_undeclared_head(vocabulary):
    """Test an undeclared head raises."""
    with pytest.raises(UndeclaredInvariantError):
        vocabulary.symbol("K")


def test_double_declaration(vocabulary):
    """Test a head cannot be declared twice."""
    with pytest.raises(ValueError):
        vocabulary.declare_head("S", ["i", "i"])


def test_index_class_mismatch(vocabulary):
    """Test a fibre index in a base slot raises."""
    with pytest.raises(IndexClassMismatchError):
        vocabulary.term("M", (1, 3, 3))


def test_slot_count_mismatch(vocabulary):
    """Test a wrong number of slot indices raises."""
    with pytest.raises(IndexClassMismatchError):
        vocabulary.term("M", (1, 2))


def test_truncation(vocabulary):
    """Test derivative orders beyond the truncation raise."""
    with pytest.raises(TruncationError):
        vocabulary.term("S", (1, 2), (1, 2, 3))


def test_canonical_sign(vocabulary):
    """Test M[2,1,a] is rewritten as -M[1,2,a]."""
    assert vocabulary.expr("M", (2, 1, 3)) == -sympy.Symbol("M[1,2,3]")
    assert vocabulary.expr("M", (1, 2, 3)) == sympy.Symbol("M[1,2,3]")


def test_canonical_annihilated(vocabulary):
    """Test an antisymmetric pair with equal indices is zero."""
    assert vocabulary.expr("M", (1, 1, 3)) == 0


def test_canonical_riemann(vocabulary):
    """Test Riemann symmetries reach the orbit minimum."""
    r1212 = sympy.Symbol("R[1,2,1,2]")

    assert vocabulary.expr("R", (2, 1, 1, 2)) == -r1212
    assert vocabulary.expr("R", (2, 1, 2, 1)) == r1212
    assert vocabulary.expr("R", (1, 1, 1, 2)) == 0


def test_canonicalize_keeps_derivatives(vocabulary):
    """Test canonicalization permutes slots only."""
    term = vocabulary.term("S", (2, 1), (4,))
    canonical = canonicalize(term, vocabulary)

    assert canonical.indices == (1, 2)
    assert canonical.derivs == (4,)
    assert canonical.sign == 1
    assert canonical.name == "S[1,2;4]"


def test_instances(vocabulary):
    """Test canonical instances of M are M[1,2,a]."""
    names = [s.name for s in vocabulary.instances("M")]

    assert names == ["M[1,2,3]", "M[1,2,4]"]
    assert len(vocabulary.instances("S")) == 3


def test_parse(vocabulary):
    """Test symbol names parse back to instances."""
    term = vocabulary.parse(sympy.Symbol("M[1,2,3;1]"))

    assert term.head == "M"
    assert term.indices == (1, 2, 3)
    assert term.derivs == (1,)
    assert vocabulary.parse(sympy.Symbol("x")) is None
    assert vocabulary.parse(sympy.Symbol("K[1,3,4]")) is None


def test_invariant_symbols_sorted(vocabulary):
    """Test invariant symbols are extracted by name."""
    s11, m123, x = map(sympy.Symbol, ("S[1,1]", "M[1,2,3]", "x"))

    assert vocabulary.invariant_symbols(x * s11 + m123) == [m123, s11]


def test_derivative(vocabulary):
    """Test covariant derivative symbols append an index."""
    m123 = sympy.Symbol("M[1,2,3]")

    assert vocabulary.derivative(m123, 4) == sympy.Symbol("M[1,2,3;4]")
    with pytest.raises(TruncationError):
        vocabulary.derivative(sympy.Symbol("M[1,2,3;4,1]"), 2)


def test_monomial_terms():
    """Test expansion into monomial coefficients."""
    x, y = sympy.symbols("x y")

    assert monomial_terms((x + y) ** 2 - y ** 2) == {x ** 2: 1, x * y: 2}
    assert monomial_terms(x - x) == {}


def test_reducer_rules(vocabulary):
    """Test linear relations become rewriting rules."""
    s11, s12, s22 = map(sympy.Symbol, ("S[1,1]", "S[1,2]", "S[2,2]"))
    reducer = Reducer([s11 - s12, s12 + s22 - 2], vocabulary)

    assert reducer.incompatible is None
    assert reducer.normal_form(s11) == 2 - s22
    assert reducer.is_zero(s11 - s12)
    assert reducer.normal_form(s11 * s12) == sympy.expand((2 - s22) ** 2)


def test_reducer_incompatible(vocabulary):
    """Test contradictory relations are detected."""
    s11 = sympy.Symbol("S[1,1]")
    reducer = Reducer([s11 - 1, s11 - 2], vocabulary)

    assert reducer.incompatible is not None


def test_reducer_ignores_trivial_relations(vocabulary):
    """Test zero relations produce no rules."""
    reducer = Reducer([sympy.Integer(0)], vocabulary)

    assert reducer.rules == {}
    assert reducer.residual == []


def test_table_independence():
    """Test only the normal-ordered Riemann component is independent."""
    from cartan_sub.counting import seed_table
    from cartan_sub.geometries import builtin

    geom = builtin("Riemannian", {"n": 3})
    table = seed_table("Riemannian")
    sym = next(iter(geom.inv("R", 1, 2, 1, 2).free_symbols))
    term = geom.vocabulary.parse(sym)
    seed = seed_form(term, table)

    assert not is_independent(term, table)
    assert seed.indices == (2, 1, 2, 1)
    assert seed.sign == 1
    assert is_independent(seed, table)


def test_reducer_keeps_rules_under_products():
    """Test a rule substituted into a product row survives the next pass."""
    a, b, c = sympy.symbols("a b c")
    reducer = Reducer([a - b * c, b], None)

    assert reducer.rules == {a: 0, b: 0}
    assert reducer.is_zero(b)
    assert reducer.is_zero(a)
    assert reducer.normal_form(c) == c


def test_reducer_residual_products(vocabulary):
    """Test a rule with a product on its right side picks up the other rules."""
    s11, s12, s22 = map(sympy.Symbol, ("S[1,1]", "S[1,2]", "S[2,2]"))
    reducer = Reducer([s11 * s22 - s12, s11 - 1], vocabulary)

    assert reducer.incompatible is None
    assert reducer.rules[s12] == s22
    assert reducer.is_zero(s12 - s22)
    assert reducer.normal_form(s11 * s12) == s22
