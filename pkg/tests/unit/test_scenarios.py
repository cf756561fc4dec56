"""Unit tests for certificates, curvature dictionaries and the theorem verifiers."""
from fractions import Fraction
from itertools import product
import pytest
import sympy
from cartan_sub.core.errors import (
    CertificateReplayError,
    DimensionGuardError,
    InvalidParametersError,
)
from cartan_sub.geometries import builtin
from cartan_sub.identities import RelationSet
from cartan_sub.invariants import SYM_PAIR, IndexClass, Vocabulary
from cartan_sub.models.responses import FAILED, PASS, CertificateBranch, CertificateModel
from cartan_sub.scenarios import (
    check_certificate,
    contractions,
    curvature_dictionary,
    ellis_geodesic,
    ellis_irrotational,
    herglotz_noether_conformal,
    herglotz_noether_homogeneous,
    killing_chain,
    killing_criteria,
    linear_system,
    nonzero_for_all_n,
    random_assignment_oracle,
    replay_certificate,
    scale_curvature_contraction,
    semi_killing_lift,
    shear_free_reduction,
    verify_dictionary_consistency,
    weyl_component,
    write_certificate,
)
from cartan_sub.scenarios.certificate import (
    PIVOT_PREFIX,
    fraction_rref,
    pivot_coefficients,
    record_pivots,
    replay_system,
)
from cartan_sub.scenarios.herglotz import STEP1_PIVOTS, STEP2_PIVOTS, n_symbol

pytestmark = pytest.mark.unit

x, y = sympy.symbols("x y")


@pytest.fixture
def forced_system():
    """x + y = 0 and y = 0: both unknowns vanish."""
    return linear_system("triangular", [x + y, y], [x, y])


@pytest.fixture
def certificate(forced_system):
    return CertificateModel(
        scenario="test",
        dims={"n": 2},
        branches=[CertificateBranch(label="only", systems=[forced_system])],
    )


# Certificates

def test_linear_system_forced(forced_system):
    """Test rows, pivots and forced unknowns are recorded."""
    assert forced_system.unknowns == ["x", "y"]
    assert forced_system.rows == [["1", "1", "0"], ["0", "1", "0"]]
    assert forced_system.pivots == [0, 1]
    assert sorted(forced_system.forced_zero) == ["x", "y"]
    assert not forced_system.inconsistent
    assert replay_system(forced_system) == []


def test_linear_system_free_unknown():
    """Test an underdetermined system forces nothing."""
    system = linear_system("one equation", [x + y], [x, y])

    assert system.forced_zero == []
    assert replay_system(system) == []


def test_linear_system_inconsistent():
    """Test x = 1 and x = 2 is flagged and replays as inconsistent."""
    system = linear_system("contradiction", [x - 1, x - 2], [x])

    assert system.inconsistent
    assert system.forced_zero == []
    assert replay_system(system) == []


def test_linear_system_rejects_symbolic_rhs():
    """Test right-hand sides must be rational."""
    with pytest.raises(InvalidParametersError):
        linear_system("symbolic", [x - y], [x])


def test_replay_detects_false_claim():
    """Test an unsupported forced-zero claim is reported."""
    system = linear_system("one equation", [x + y], [x, y])
    system.forced_zero = ["x"]

    problems = replay_system(system)

    assert len(problems) == 1
    assert "not forced to zero" in problems[0]


def test_replay_detects_zero_coefficient(forced_system):
    """Test coefficients claimed nonzero are checked."""
    forced_system.nonzero = {"pivot": "0"}

    assert any("is zero" in p for p in replay_system(forced_system))


def test_pivot_coefficients():
    """Test the leading entries of forward elimination are recorded per unknown."""
    system = record_pivots(linear_system("scaled", [2 * x + y, 3 * y], [x, y]))

    assert pivot_coefficients(system) == {"x": Fraction(2), "y": Fraction(3)}
    assert system.nonzero == {f"{PIVOT_PREFIX}x": "2", f"{PIVOT_PREFIX}y": "3"}
    assert replay_system(system) == []


def test_replay_detects_wrong_pivot():
    """Test a recorded pivot that the elimination does not meet is reported."""
    system = record_pivots(linear_system("scaled", [2 * x + y, 3 * y], [x, y]))
    system.nonzero[f"{PIVOT_PREFIX}y"] = "5"

    problems = replay_system(system)

    assert len(problems) == 1
    assert "replays as 3" in problems[0]


def test_fraction_rref():
    """Test exact row reduction over the coefficient columns."""
    rows = [[Fraction(2), Fraction(4), Fraction(6)], [Fraction(1), Fraction(2), Fraction(3)]]
    reduced, pivots = fraction_rref(rows, 2)

    assert pivots == [0]
    assert reduced[0] == [1, 2, 3]
    assert reduced[1] == [0, 0, 0]


def test_certificate_round_trip(certificate, tmp_path):
    """Test a written certificate replays from disk."""
    path = write_certificate(certificate, tmp_path / "cert.json")
    replayed = check_certificate(path)

    assert replayed.scenario == "test"
    assert replayed.passed


def test_failed_certificate_rejected(certificate, tmp_path):
    """Test a FAILED certificate does not pass the check."""
    certificate.status = FAILED
    path = write_certificate(certificate, tmp_path / "cert.json")

    with pytest.raises(CertificateReplayError) as exc_info:
        check_certificate(path)
    assert exc_info.value.exit_code == 2


def test_status_bookkeeping(certificate):
    """Test PASS with a failed branch or a witness is inconsistent."""
    certificate.branches[0].status = FAILED
    certificate.witness = [[0.0, 1.0], [-1.0, 0.0]]

    problems = replay_certificate(certificate)

    assert "certificate marked PASS with a failed branch" in problems
    assert "certificate marked PASS but carries a counterexample witness" in problems


# Dictionaries

def test_dictionary_components():
    """Test the Riemann symmetries of the dictionary."""
    dictionary = curvature_dictionary(1, 1)

    assert dictionary.n == 2
    assert dictionary.component(2, 1, 1, 2) == -dictionary.component(1, 2, 1, 2)
    assert dictionary.component(1, 1, 1, 2) == 0
    assert list(dictionary.equations()) == ["R[1,2,1,2]"]


def test_dictionary_consistency():
    """Test the dictionary of RiemannianSubmersion(1, 1) is consistent."""
    certificate = verify_dictionary_consistency(1, 1, assignments=5, seed=7)

    assert certificate.passed
    assert [b.label for b in certificate.branches] == [
        "first Bianchi",
        "pair symmetry",
        "structure equations",
        "random assignments",
    ]


@pytest.mark.slow
def test_dictionary_consistency_larger():
    """Test the dictionary of RiemannianSubmersion(1, 2) is consistent."""
    assert verify_dictionary_consistency(1, 2, assignments=5).passed


def test_dictionary_dimension_limit():
    """Test p + q above 6 is refused."""
    with pytest.raises(InvalidParametersError):
        verify_dictionary_consistency(4, 3)


def test_contractions():
    """Test Ricci, scalar and unknown contractions on a surface-like dictionary."""
    dictionary = curvature_dictionary(1, 1)
    ricci = contractions(dictionary, "ricci")
    scalar = contractions(dictionary, "scalar")

    assert sympy.expand(ricci.get("R[1,1]", 0) + ricci.get("R[2,2]", 0) - scalar["R"]) == 0
    with pytest.raises(InvalidParametersError):
        contractions(dictionary, "torsion")


def test_weyl_below_four_dimensions():
    """Test the Weyl tensor is refused when it is trivial."""
    dictionary = curvature_dictionary(1, 2)

    with pytest.raises(DimensionGuardError):
        weyl_component(dictionary, 1, 2, 1, 2)
    with pytest.raises(DimensionGuardError):
        contractions(dictionary, "weyl")


def test_random_assignment_oracle():
    """Test expressions outside the relation ideal are caught."""
    vocabulary = Vocabulary([IndexClass("i", 2)], truncation=1)
    vocabulary.declare_head("S", ["i", "i"], SYM_PAIR)
    s11, s12 = map(sympy.Symbol, ("S[1,1]", "S[1,2]"))
    relations = RelationSet(vocabulary, "test")
    relations.add_expr(s11 - s12)

    assert random_assignment_oracle([s11 - s12, s11], relations, 10, 42) == [1]


@pytest.mark.slow
def test_scale_curvature_contraction():
    """Test S_[jl] = (p-2)/2 G_jl at p = 3."""
    result = scale_curvature_contraction(3)

    assert result["factor"] == "1/2"
    assert result["checked"] == 3
    assert result["failures"] == []


# Theorems

def test_pivots_nonzero():
    """Test the recorded pivots have no zero or pole for n >= 4."""
    for value in list(STEP1_PIVOTS.values()) + list(STEP2_PIVOTS.values()):
        assert nonzero_for_all_n(value)
    assert not nonzero_for_all_n(n_symbol - 5)
    assert not nonzero_for_all_n(1 / (n_symbol - 4))


def test_herglotz_homogeneous_surface():
    """Test n = 2 has only the irrotational branch, with characters (1, 0)."""
    certificate = herglotz_noether_homogeneous(2)

    assert certificate.passed
    assert [b.label for b in certificate.branches] == ["M=0"]
    assert certificate.branches[0].characters == [1, 0]


@pytest.mark.slow
def test_herglotz_homogeneous_three_dimensions():
    """Test rotational rigid flows in constant curvature are Killing at n = 3."""
    certificate = herglotz_noether_homogeneous(3)
    irrotational = next(b for b in certificate.branches if b.label == "M=0")
    rotational = next(b for b in certificate.branches if b.label == "M!=0")

    assert certificate.passed
    assert irrotational.characters == [2, 0, 0]
    assert rotational.characters == [0, 0, 0]
    assert replay_certificate(certificate) == []


@pytest.mark.slow
def test_herglotz_homogeneous_four_dimensions():
    """Test the n = 4 rotational branch leaves no free functions."""
    certificate = herglotz_noether_homogeneous(4)
    rotational = next(b for b in certificate.branches if b.label == "M!=0")
    irrotational = next(b for b in certificate.branches if b.label == "M=0")

    assert certificate.passed
    assert "Killing flow" in rotational.conclusion
    assert rotational.characters == [0, 0, 0, 0]
    assert irrotational.characters == [3, 0, 0, 0]


def test_herglotz_homogeneous_rejects_small_dimension():
    with pytest.raises(InvalidParametersError):
        herglotz_noether_homogeneous(1)


@pytest.mark.parametrize("n", [2, 3])
def test_herglotz_conformal_dimension_guard(n):
    """Test the conformally flat case refuses n < 4 with the math exit code."""
    with pytest.raises(DimensionGuardError) as exc_info:
        herglotz_noether_conformal(n)
    assert exc_info.value.exit_code == 2


@pytest.mark.slow
@pytest.mark.parametrize("n", [5, 6])
def test_herglotz_conformal_passes(n):
    """Test rotational rigid flows in conformally flat space are Killing for n = 5, 6."""
    certificate = herglotz_noether_conformal(n, seed=3)

    assert certificate.passed
    assert replay_certificate(certificate) == []
    assert [b.label for b in certificate.branches] == ["step 1: vorticity", "step 2: acceleration"]
    for branch in certificate.branches:
        for system in branch.systems:
            assert system.nonzero
            assert all(name.startswith(PIVOT_PREFIX) for name in system.nonzero)


@pytest.mark.slow
def test_herglotz_conformal_four_dimensions():
    """Test n = 4 replays, with only the vorticity step left open."""
    certificate = herglotz_noether_conformal(4, seed=3)
    failed = [b.label for b in certificate.branches if b.status != PASS]
    quadratic = certificate.branches[0].systems[0]

    assert replay_certificate(certificate) == []
    assert set(failed) <= {"step 1: vorticity"}
    assert quadratic.unknowns
    assert sum("printed pivot" in note for note in certificate.notes) == 4


@pytest.mark.parametrize("p", [2, 3])
def test_ellis_irrotational(p):
    """Test M = 0 forces every product E0 K_j to vanish."""
    certificate = ellis_irrotational(p)

    assert certificate.passed
    assert sorted(certificate.branches[0].systems[0].forced_zero) == sorted(
        certificate.branches[0].systems[0].unknowns
    )


def test_ellis_irrotational_with_assumption():
    """Test K = 0 makes the momentum constraint an identity."""
    certificate = ellis_irrotational(2, assume="K=0")

    assert certificate.passed
    assert certificate.branches[0].conclusion == "identity"


def test_ellis_errors():
    """Test bad dimensions and unknown assumptions raise."""
    with pytest.raises(InvalidParametersError):
        ellis_irrotational(0)
    with pytest.raises(InvalidParametersError):
        ellis_irrotational(2, assume="M=0")
    with pytest.raises(InvalidParametersError):
        ellis_geodesic(3)


def test_ellis_geodesic_expansion_free():
    """Test E0 = 0 short-circuits to the rigid case."""
    certificate = ellis_geodesic(4, assume="E0=0")

    assert certificate.passed
    assert [b.label for b in certificate.branches] == ["E0=0"]


@pytest.mark.slow
def test_ellis_geodesic():
    """Test the geodesic case at n = 4 finds no witness."""
    certificate = ellis_geodesic(4, trials=50, seed=42)

    assert certificate.witness is None
    assert [b.label for b in certificate.branches] == ["lambda0 = E0", "pressure", "rigidity"]
    assert certificate.passed


# Killing fields

def test_killing_chain():
    """Test L_V omega_mu = 0 annihilates the connection and the curvature."""
    chain = killing_chain(2)
    geom = builtin("Riemannian", {"n": 2})

    assert chain.undetermined_generators == []
    assert chain.undetermined_symbols == []
    assert set(chain.zero_generators) == {g.name for g in geom.coframe if not g.is_horizontal}
    assert chain.to_dict()["rounds"] == chain.rounds


def test_semi_killing_lift():
    """Test the lift exists exactly when M_(ij)a = 0 and K_i[ab] = 0."""
    lift = semi_killing_lift(2, 1)
    geom = lift["geometry"]
    conditions = lift["conditions"]
    base = list(geom.vocabulary.classes["i"].values())
    fibre = list(geom.vocabulary.classes["a"].values())

    assert lift["lift"]
    for i, j, a in product(base, base, fibre):
        assert conditions.implies(geom.inv("M", i, j, a) + geom.inv("M", j, i, a))


def test_killing_criteria(born_rigid_3, riem_sub_11, riemannian_3):
    """Test criteria by codimension and the required invariants."""
    flow = killing_criteria(born_rigid_3, 1)

    assert flow == ["M[i,j;3] = 0", "K[i;3] = 0", "d log(lambda)/dx^i = K[i]"]
    assert "L_V S_fibre = 0" in killing_criteria(riem_sub_11, 2)
    with pytest.raises(InvalidParametersError):
        killing_criteria(riem_sub_11, 1)
    with pytest.raises(InvalidParametersError):
        killing_criteria(riem_sub_11, 0)
    with pytest.raises(InvalidParametersError):
        killing_criteria(riemannian_3, 2)


@pytest.mark.slow
def test_shear_free_reduction():
    """Test the shear-free lift, metric scaling and invariant coframe at p = 2."""
    result = shear_free_reduction(2)

    assert result.lift_ok
    assert result.metric_ok
    assert result.theta_ok
    assert result.vertical_ok
    assert result.passed
    assert result.to_dict()["p"] == 2


def test_shear_free_reduction_dimension():
    with pytest.raises(InvalidParametersError):
        shear_free_reduction(1)
