"""Unit tests for geometry systems, bundle reduction and definition files."""
import json
import pytest
import sympy
from cartan_sub.core.errors import (
    GeometryDefinitionError,
    InvalidParametersError,
    MissingDRuleError,
    NonReductiveGeometryError,
    UnknownGeometryError,
)
from cartan_sub.forms import Coframe, FormExpr
from cartan_sub.geometries import (
    GeometrySystem,
    MatrixLieAlgebra,
    builtin,
    definition_schema,
    geometry_from_config,
    load_geometry,
    orthogonal_algebra,
    parameter_names,
    projective_isotropy_algebra,
    resolve_name,
    riemannian_decomposition,
    stabilizer_reduction,
    validate_against_builtin,
    weyl_codim1_decomposition,
)
from cartan_sub.invariants import IndexClass, Vocabulary

pytestmark = pytest.mark.unit


def test_resolve_aliases():
    """Test CLI aliases resolve to built-in names."""
    assert resolve_name("riem-sub") == "RiemannianSubmersion"
    assert resolve_name("weyl-sub") == "WeylSubmersionCodim1"
    assert resolve_name("born-rigid") == "BornRigid"
    assert resolve_name("Riemannian") == "Riemannian"
    assert parameter_names("riem-sub") == ("p", "q")


def test_unknown_geometry():
    """Test unknown names raise."""
    with pytest.raises(UnknownGeometryError):
        resolve_name("kaehler")


def test_missing_parameters():
    """Test a missing dimension parameter raises."""
    with pytest.raises(InvalidParametersError):
        builtin("RiemannianSubmersion", {"p": 2})


def test_weyl_needs_two_dimensions():
    """Test Weyl(1) is rejected."""
    with pytest.raises(InvalidParametersError):
        builtin("Weyl", {"n": 1})


def test_weyl_scale_curvature():
    """Test d tau = 1/2 F[mu,nu] omega[mu] ^ omega[nu] on Weyl(3)."""
    geom = builtin("Weyl", {"n": 3})
    d_tau = geom.d_rule(geom.scale)
    w1, w2, w3 = geom.frame[1], geom.frame[2], geom.frame[3]

    assert d_tau.grade == 2
    assert sympy.expand(d_tau.coefficient(w1, w2) - geom.inv("F", 1, 2)) == 0
    assert sympy.expand(d_tau.coefficient(w2, w1) + geom.inv("F", 1, 2)) == 0
    assert sympy.expand(d_tau.coefficient(w2, w3) - geom.inv("F", 2, 3)) == 0
    assert d_tau.coefficient(w1, geom.scale) == 0


def test_riemannian_submersion_coframe(riem_sub_22):
    """Test generators and invariants of RiemannianSubmersion(2, 2)."""
    names = [g.name for g in riem_sub_22.coframe]

    assert names == ["pi[1]", "pi[2]", "omega[3]", "omega[4]", "pi[1,2]", "omega[3,4]"]
    assert riem_sub_22.dimension == 4
    assert riem_sub_22.label == "RiemannianSubmersion(p=2,q=2)"
    assert riem_sub_22.vocabulary.heads == ["M", "K", "S_base", "S_fibre"]
    assert set(riem_sub_22.d_rules) == set(riem_sub_22.coframe)


def test_riemannian_submersion_base_rule(riem_sub_22):
    """Test d pi_1 = -pi_12 ^ pi_2."""
    expected = -(riem_sub_22.form("pi", 1, 2) ^ riem_sub_22.form("pi", 2))

    assert riem_sub_22.d_rule(riem_sub_22.coframe.get("pi", 1)) == expected


def test_born_rigid_coframe():
    """Test BornRigid(4) has three base forms, omega0 and pi_ij."""
    geom = builtin("born-rigid", {"n": 4})
    horizontal = [g.name for g in geom.horizontal]
    vertical = [g.name for g in geom.coframe if not g.is_horizontal]

    assert horizontal == ["omega[1]", "omega[2]", "omega[3]", "omega0"]
    assert vertical == ["pi[1,2]", "pi[1,3]", "pi[2,3]"]
    assert geom.vocabulary.heads == ["M", "K", "S"]
    assert geom.label == "BornRigid(n=4)"


def test_codimension_one_accepts_total_dimension():
    """Test WeylSubmersionCodim1 maps n to p = n - 1."""
    geom = builtin("weyl-sub", n=3)

    assert geom.params == {"p": 2}
    assert geom.scale.name == "varpi"


def test_galilean_absolute_time():
    """Test d tau = 0 in the Galilean system."""
    geom = builtin("GalileanRigid", {"n": 3})

    assert geom.d_rule(geom.coframe.get("tau")).is_zero()
    assert not geom.check_vertical
    assert len(geom.defining_relations()) > 0


def test_connection_components(riem_sub_22):
    """Test signed connection access."""
    assert riem_sub_22.connection("i", 2, 1) == -riem_sub_22.form("pi", 1, 2)
    assert riem_sub_22.connection("a", 3, 3).is_zero()


def test_set_rule_requires_two_form(riem_sub_22):
    """Test structure equations must be two-forms."""
    gen = riem_sub_22.coframe.get("pi", 1)
    with pytest.raises(ValueError):
        riem_sub_22.set_rule(gen, riem_sub_22.form("pi", 2))


def test_missing_d_rule():
    """Test a generator without a rule raises on lookup and validation."""
    coframe = Coframe()
    gen = coframe.add("theta", (1,))
    vocabulary = Vocabulary([IndexClass("i", 1)])
    geom = GeometrySystem("Bare", {"n": 1}, coframe, vocabulary, {1: gen})

    with pytest.raises(MissingDRuleError):
        geom.d_rule(gen)
    with pytest.raises(MissingDRuleError):
        geom.validate()


def test_summary(born_rigid_3):
    """Test the summary lists generators, invariants and rules."""
    summary = born_rigid_3.summary()

    assert summary["name"] == "BornRigid"
    assert summary["params"] == {"n": 3}
    assert {"name": "omega0", "kind": "horizontal"} in summary["generators"]
    assert set(summary["d_rules"]) == {g["name"] for g in summary["generators"]}


def test_orthogonal_reduction_to_fibre_rotations():
    """Test so(4) fixing the base and preserving the fibre leaves so(2)."""
    reduced = stabilizer_reduction(orthogonal_algebra(4), [1, 2], [3, 4])

    assert reduced.dimension == 1
    assert reduced.is_closed()
    assert reduced.basis[0][2, 3] != 0


@pytest.mark.parametrize("p,q", [(1, 2), (2, 3), (1, 4)])
def test_orthogonal_reduction_dimension(p, q):
    """Test the reduced algebra has dimension q(q-1)/2."""
    reduced = stabilizer_reduction(
        orthogonal_algebra(p + q), list(range(1, p + 1)), list(range(p + 1, p + q + 1))
    )

    assert reduced.dimension == q * (q - 1) // 2
    assert reduced.is_closed()


def test_so3_plane_rotation():
    """Test so(3) fixing index 1 leaves the rotation in the 2-3 plane."""
    reduced = stabilizer_reduction(orthogonal_algebra(3), [1], [2, 3])

    assert reduced.dimension == 1


def test_reduction_without_conditions():
    """Test no fixed or preserved indices keep the whole algebra."""
    assert stabilizer_reduction(orthogonal_algebra(3), [], []).dimension == 3


def test_reduction_errors():
    """Test empty algebras, overlaps and out-of-range indices raise."""
    with pytest.raises(InvalidParametersError):
        stabilizer_reduction(MatrixLieAlgebra([]), [1], [])
    with pytest.raises(InvalidParametersError):
        stabilizer_reduction(orthogonal_algebra(3), [1], [1, 2])
    with pytest.raises(InvalidParametersError):
        stabilizer_reduction(orthogonal_algebra(3), [4], [])


def test_projective_isotropy():
    """Test the projective isotropy algebra is a closed subalgebra of sl(n+1)."""
    algebra = projective_isotropy_algebra(2)

    assert algebra.dimension == 6
    assert algebra.vector_dimension == 2
    assert algebra.is_closed()


def test_riemannian_decomposition():
    """Test the dependent forms of Riemannian(4) over RiemannianSubmersion(2, 2)."""
    decomposition = riemannian_decomposition(2, 2)
    solution = decomposition.solution
    value = lambda name: sympy.Symbol(name).xreplace(solution)

    assert decomposition.verified
    assert not decomposition.incompatible
    for family in ("A", "B", "C", "U", "V"):
        assert family in decomposition.zero_families()
    assert sympy.expand(value("M[1,2,3]") + value("M[2,1,3]")) == 0
    assert value("M[1,1,4]") == 0
    assert sympy.expand(value("K[1,3,4]") - value("K[1,4,3]")) == 0
    assert "omega[1,3]" in decomposition.forms


def test_trivial_decomposition():
    """Test q = 0 gives an empty decomposition."""
    decomposition = riemannian_decomposition(2, 0)

    assert decomposition.forms == {}
    assert decomposition.to_dict()["verified"] is True


def test_load_born_rigid_definition(fixtures_dir):
    """Test a definition file matching the built-in loads."""
    geom = load_geometry(fixtures_dir / "born_rigid_n2.json")

    assert geom.name == "BornRigid"
    assert validate_against_builtin(geom) == []


def test_non_reductive_definition(fixtures_dir):
    """Test non-reductive geometries are rejected at load time."""
    with pytest.raises(NonReductiveGeometryError):
        load_geometry(fixtures_dir / "non_reductive.json")


def test_definition_differs_from_builtin(fixtures_dir, tmp_path):
    """Test a wrong d-rule is reported against the built-in."""
    data = json.loads((fixtures_dir / "born_rigid_n2.json").read_text())
    data["d_rules"]["omega0"][0]["coefficient"] = "1"
    path = tmp_path / "wrong.json"
    path.write_text(json.dumps(data))

    with pytest.raises(GeometryDefinitionError):
        load_geometry(path)


def test_malformed_definition(tmp_path):
    """Test invalid JSON raises a definition error."""
    path = tmp_path / "broken.json"
    path.write_text("{not json")

    with pytest.raises(GeometryDefinitionError):
        load_geometry(path)


def test_geometry_from_config(fixtures_dir):
    """Test names build built-ins and paths load files."""
    assert geometry_from_config("riem", {"n": 2}).name == "Riemannian"
    assert geometry_from_config(str(fixtures_dir / "born_rigid_n2.json"), {}).name == "BornRigid"


def test_definition_schema():
    """Test the schema describes the definition fields."""
    schema = definition_schema()

    assert "generators" in schema["properties"]
    assert "d_rules" in schema["properties"]


@pytest.mark.slow
def test_weyl_codim1_decomposition():
    """Test tau = varpi + E0 omega0, with B[i,j] = delta[i,j] E0 + N[i,j] for p = 3."""
    decomposition = weyl_codim1_decomposition(3)
    value = lambda name: sympy.expand(sympy.Symbol(name).xreplace(decomposition.solution))
    tau = decomposition.forms["tau"]
    reduced = builtin("WeylSubmersionCodim1", {"p": 3})

    assert decomposition.verified
    assert not decomposition.incompatible
    assert "H" in decomposition.zero_families()
    assert tau.coefficient(reduced.coframe.by_name("varpi")) == 1
    for k in (1, 2, 3):
        assert tau.coefficient(reduced.coframe.by_name(f"omega[{k}]")) == 0
    assert sympy.expand(tau.coefficient(reduced.coframe.by_name("omega0")) - value("B[1,1]")) == 0
    assert value("B[1,1]") == value("B[2,2]") == value("B[3,3]")
    assert sympy.expand(value("B[1,2]") - value("N[1,2]")) == 0
