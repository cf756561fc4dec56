"""Unit tests for relation derivation and catalog comparison."""
import numpy as np
import pytest
import sympy
from cartan_sub.core.errors import InvalidParametersError
from cartan_sub.forms import FormExpr, VectorField, exterior_d, lie_derivative
from cartan_sub.geometries import builtin
from cartan_sub.identities import (
    Relation,
    RelationSet,
    catalog,
    coefficient_table,
    compare_with_catalog,
    derive_identities,
    has_catalog,
    verify_d_squared,
    weyl_flatness_relations,
)
from cartan_sub.invariants import SYM_PAIR, IndexClass, Vocabulary, reduce_modulo

pytestmark = pytest.mark.unit


@pytest.fixture
def vocabulary():
    vocab = Vocabulary([IndexClass("i", 2)], truncation=1)
    vocab.declare_head("S", ["i", "i"], SYM_PAIR)
    return vocab


def test_relation_normalization(vocabulary):
    """Test the leading monomial carries coefficient one."""
    s11, s12 = map(sympy.Symbol, ("S[1,1]", "S[1,2]"))
    relation = Relation.from_expr(2 * s11 - 4 * s12, vocabulary)

    assert relation.expr == s11 - 2 * s12
    assert relation.lhs == s11
    assert relation.rhs == 2 * s12
    assert str(relation).endswith(" = 0")


def test_trivial_relation(vocabulary):
    """Test 0 = 0 gives no relation."""
    assert Relation.from_expr(sympy.Integer(0), vocabulary) is None


def test_relation_order(vocabulary):
    """Test the order is the highest derivative order present."""
    relation = Relation.from_expr(sympy.Symbol("S[1,1;2]") - sympy.Symbol("S[1,2]"), vocabulary)

    assert relation.order == 1
    assert relation.to_dict()["order"] == 1


def test_relation_set_deduplicates(vocabulary):
    """Test equal relations are stored once."""
    s11, s12 = map(sympy.Symbol, ("S[1,1]", "S[1,2]"))
    relations = RelationSet(vocabulary, "test")

    assert relations.add_expr(s11 - s12)
    assert not relations.add_expr(3 * s11 - 3 * s12)
    assert not relations.add_expr(sympy.Integer(0))
    assert len(relations) == 1
    assert s12 - s11 in relations


def test_relation_set_contradiction(vocabulary):
    """Test constants are recorded as incompatible."""
    relations = RelationSet(vocabulary, "test")
    relations.add_expr(sympy.Integer(5))

    assert len(relations) == 0
    assert len(relations.incompatible) == 1
    assert not relations.is_consistent


def test_relation_set_implies(vocabulary):
    """Test implication by rewriting."""
    s11, s12, s22 = map(sympy.Symbol, ("S[1,1]", "S[1,2]", "S[2,2]"))
    relations = RelationSet(vocabulary, "test")
    relations.add_expr(s11 - s12)
    relations.add_expr(s12 - s22)

    assert relations.implies(s11 - s22)
    assert not relations.implies(s11)
    assert relations.normal_form(s11 + s12) == 2 * s22


def test_relation_set_merge_and_order(vocabulary):
    """Test merging keeps both sides and grouping by order."""
    s11, s12 = map(sympy.Symbol, ("S[1,1]", "S[1,2]"))
    first = RelationSet(vocabulary, "first")
    first.add_expr(s11)
    second = RelationSet(vocabulary, "second")
    second.add_expr(sympy.Symbol("S[1,2;1]") - s12)
    merged = first.merge(second)

    assert len(merged) == 2
    assert sorted(merged.by_order()) == [0, 1]
    assert merged.to_dict()["counts"] == {"0": 1, "1": 1}
    assert "## Order 1 (1)" in merged.to_markdown()


def test_order_above_truncation(riem_sub_11):
    """Test deriving beyond the truncation order raises."""
    with pytest.raises(InvalidParametersError):
        derive_identities(riem_sub_11, order=riem_sub_11.vocabulary.truncation + 1)


def test_riemannian_d_squared():
    """Test d^2 = 0 on Riemannian(3) modulo its derived relations."""
    geom = builtin("Riemannian", {"n": 3}, truncation=1)
    relations = derive_identities(geom)

    assert not relations.incompatible
    assert verify_d_squared(geom, relations) == {}


def test_d_squared_residual_without_relations(born_rigid_3):
    """Test d^2 omega0 only vanishes once the derived relations are applied."""
    empty = RelationSet(born_rigid_3.vocabulary, "empty", born_rigid_3)

    assert "omega0" in verify_d_squared(born_rigid_3, empty)
    assert verify_d_squared(born_rigid_3) == {}


def test_lie_derivative_commutes_with_d():
    """Test d L_V alpha = L_V d alpha for random constant V and alpha on Riemannian(3)."""
    geom = builtin("Riemannian", {"n": 3}, truncation=1)
    reducer = derive_identities(geom).reducer()
    rng = np.random.default_rng(11)
    draw = lambda: sympy.Integer(int(rng.integers(-5, 6)))
    vector = VectorField({gen: draw() for gen in geom.coframe})
    alpha = FormExpr()
    for gen in geom.coframe:
        alpha = alpha + FormExpr.generator(gen, draw())

    left = exterior_d(lie_derivative(vector, alpha, geom), geom)
    right = lie_derivative(vector, exterior_d(alpha, geom), geom)

    assert (left - right).map_coefficients(reducer.normal_form).is_zero()


def test_riemannian_first_bianchi():
    """Test the first Bianchi identity is derived in dimension 4."""
    geom = builtin("Riemannian", {"n": 4}, truncation=1)
    relations = derive_identities(geom, order=0)
    bianchi = geom.inv("R", 1, 2, 3, 4) + geom.inv("R", 1, 3, 4, 2) + geom.inv("R", 1, 4, 2, 3)

    assert relations.implies(bianchi)


def test_riemannian_submersion_matches_catalog(riem_sub_11):
    """Test RiemannianSubmersion(1, 1) relations agree with the catalog."""
    report = compare_with_catalog(derive_identities(riem_sub_11))

    assert report.is_empty
    assert not report.incompatible
    assert report.geometry == "RiemannianSubmersion(p=1,q=1)"


@pytest.mark.slow
def test_riemannian_submersion_22_matches_catalog(riem_sub_22):
    """Test RiemannianSubmersion(2, 2) relations agree with the catalog."""
    report = compare_with_catalog(derive_identities(riem_sub_22))

    assert report.catalog_only == []
    assert report.derived_only == []


@pytest.mark.slow
def test_born_rigid_matches_catalog(born_rigid_3):
    """Test BornRigid(3) relations agree with the catalog."""
    derived = derive_identities(born_rigid_3)

    assert verify_d_squared(born_rigid_3, derived) == {}
    assert compare_with_catalog(derived).is_empty


@pytest.mark.slow
def test_weyl_submersion_catalog(weyl_sub_2):
    """Test the reduced scale curvature relations of WeylSubmersionCodim1(2)."""
    catalogued = catalog(weyl_sub_2, 1)
    provenances = {r.provenance for r in catalogued}

    assert "G_ij = -2K_[i;j] - 2M_ij;0" in provenances
    assert "G closed" in provenances
    assert compare_with_catalog(derive_identities(weyl_sub_2, order=1)).is_empty


def test_catalog_names():
    """Test which geometries carry a catalog."""
    assert has_catalog("RiemannianSubmersion")
    assert has_catalog("BornRigid")
    assert not has_catalog("ShearFreeFlow")


def test_catalog_missing():
    """Test geometries without a catalog raise."""
    with pytest.raises(InvalidParametersError):
        catalog(builtin("ShearFreeFlow", {"n": 3}, truncation=1))


def test_compare_rejects_other_catalog(riem_sub_11):
    """Test comparing against another geometry's catalog raises."""
    with pytest.raises(InvalidParametersError):
        compare_with_catalog(derive_identities(riem_sub_11), "BornRigid")


def test_coefficient_table(riem_sub_22):
    """Test coefficients are listed in wedge order."""
    rule = riem_sub_22.d_rule(riem_sub_22.coframe.get("pi", 1))

    assert coefficient_table(rule) == [("pi[2]^pi[1,2]", 1)]


def test_weyl_flatness_without_expansion():
    """Test E0 = 0 forces the reduced scale curvature to vanish."""
    relations = weyl_flatness_relations(2, "E0=0", truncation=1)

    assert relations.implies(relations.geometry.inv("G", 1, 2))
    assert {r.provenance for r in relations} >= {"time scaling", "acceleration curl"}


def test_weyl_flatness_unknown_branch():
    """Test unknown branches raise."""
    with pytest.raises(InvalidParametersError):
        weyl_flatness_relations(2, "E0>0")


def test_reduce_modulo(vocabulary):
    """Test terms reduce to one normal form modulo a relation set."""
    s11, s12, s22 = map(sympy.Symbol, ("S[1,1]", "S[1,2]", "S[2,2]"))
    relations = RelationSet(vocabulary, "test")
    relations.add_expr(s11 - s12)
    relations.add_expr(s12 - s22)

    assert reduce_modulo(s11 - s22, relations) == 0
    assert reduce_modulo(s11 + s12, relations) == reduce_modulo(2 * s22, relations)
    assert reduce_modulo(s11 * s22, relations) != 0
