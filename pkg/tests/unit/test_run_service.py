"""Unit tests for the single-command run service."""
import pytest
from cartan_sub.core.errors import EXIT_MATH, EXIT_OK, InvalidParametersError, UnknownGeometryError
from cartan_sub.models.requests import RunConfig
from cartan_sub.models.responses import (
    FAILED,
    CertificateModel,
    CharacterReport,
    CheckResult,
    DiffReport,
    FixtureReport,
    GridReport,
    ReportSummary,
    RigidityReport,
)
from cartan_sub.scenarios import ShearFreeReduction
from cartan_sub.services.run_service import RunService, exit_code_for_report, run_service

pytestmark = pytest.mark.unit


def test_exit_codes_for_reports():
    """Test negative findings map to exit code 2."""
    assert exit_code_for_report(DiffReport(geometry="g", order=1)) == EXIT_OK
    diff = DiffReport(geometry="g", order=1, derived_only=["x = 0"])
    assert exit_code_for_report(diff) == EXIT_MATH
    assert exit_code_for_report(DiffReport(geometry="g", order=1, incompatible=True)) == EXIT_MATH
    assert exit_code_for_report(CertificateModel(scenario="s", status=FAILED)) == EXIT_MATH
    rigidity = RigidityReport(p=4, trials=1, seed=1, best_residual=0.0, witness=[[0.0]])
    assert exit_code_for_report(rigidity) == EXIT_MATH
    grid = GridReport(step=0.1, shape=[2, 2], max_residual=0.0, failed_points=3)
    assert exit_code_for_report(grid) == EXIT_MATH
    assert exit_code_for_report(FixtureReport(omega=0.0, step=0.01, radii=[1.0])) == EXIT_MATH
    assert exit_code_for_report(ShearFreeReduction(p=2)) == EXIT_MATH
    summary = ReportSummary(seed=1, truncation=2, checks=[CheckResult(name="x", status=FAILED)])
    assert exit_code_for_report(summary) == EXIT_MATH


def test_exit_code_for_plain_reports():
    """Test dictionaries and character reports always exit 0."""
    assert exit_code_for_report({"components": {}}) == EXIT_OK
    assert exit_code_for_report(CharacterReport(geometry="g", truncation=2, s=[1])) == EXIT_OK


def test_unknown_command():
    """Test unknown commands raise."""
    with pytest.raises(InvalidParametersError):
        run_service.run(RunConfig(command="prove-everything"))


def test_missing_geometry():
    """Test identities needs a geometry."""
    with pytest.raises(InvalidParametersError):
        run_service.run(RunConfig(command="identities"))


def test_dof_run():
    """Test dof returns the characters with exit code 0."""
    report, code = run_service.run(RunConfig(command="dof", geometry="riem-sub", p=2, q=3))

    assert isinstance(report, CharacterReport)
    assert report.top == 5
    assert code == EXIT_OK


def test_dof_constraint():
    """Test constraints pass through to the seed table."""
    config = RunConfig(
        command="dof", geometry="born-rigid", n=4, constraint="einstein_perfect_fluid"
    )
    report, _ = run_service.run(config)

    assert report.constraint == "einstein_perfect_fluid"
    assert report.top == 4


def test_dof_unknown_geometry():
    """Test unknown geometries propagate their error."""
    with pytest.raises(UnknownGeometryError):
        run_service.run(RunConfig(command="dof", geometry="kaehler", n=4))


def test_identities_with_catalog():
    """Test catalogued geometries return a diff."""
    report, code = run_service.run(RunConfig(command="identities", geometry="riem-sub", p=1, q=1))

    assert isinstance(report, DiffReport)
    assert code == EXIT_OK


def test_theorem_parameters(mocker):
    """Test the total dimension reaches the verifiers with the right parameter."""
    fake = mocker.MagicMock(return_value=CertificateModel(scenario="ellis-irrotational"))
    geodesic = mocker.MagicMock(return_value=CertificateModel(scenario="ellis-geodesic"))
    mocker.patch.dict(
        "cartan_sub.services.run_service.THEOREMS",
        {"ellis-irrotational": fake, "ellis-geodesic": geodesic},
    )
    service = RunService()

    irrotational = {"name": "ellis-irrotational", "assume": "K=0"}
    geodesic_options = {"name": "ellis-geodesic", "trials": 30}
    service.run(RunConfig(command="theorem", n=4, options=irrotational))
    service.run(RunConfig(command="theorem", n=5, seed=7, options=geodesic_options))

    fake.assert_called_once_with(p=3, assume="K=0")
    geodesic.assert_called_once_with(n=5, seed=7, trials=30)


def test_unknown_theorem():
    """Test unknown theorem names raise."""
    with pytest.raises(InvalidParametersError):
        run_service.run(RunConfig(command="theorem", n=4, options={"name": "poincare"}))


def test_dictionary_components():
    """Test the dictionary handler renders components as text."""
    report, code = run_service.run(RunConfig(command="dictionary", p=1, q=1))

    assert report["geometry"] == "RiemannianSubmersion(p=1,q=1)"
    assert report["components"]
    assert all(isinstance(v, str) for v in report["components"].values())
    assert code == EXIT_OK


def test_pde2d_needs_input():
    """Test pde2d without a problem file raises."""
    with pytest.raises(InvalidParametersError):
        run_service.run(RunConfig(command="pde2d"))


def test_pde2d_writes_csv(pde_problem, tmp_path):
    """Test the grid goes to the CSV path."""
    csv_path = tmp_path / "grid.csv"
    report, code = run_service.run(RunConfig(
        command="pde2d", options={"input": str(pde_problem), "csv": str(csv_path)}
    ))

    assert code == EXIT_OK
    assert report.failed_points == 0
    assert csv_path.exists()


def test_fixture_needs_omega():
    """Test the rotating fixture needs an angular rate."""
    with pytest.raises(InvalidParametersError):
        run_service.run(RunConfig(command="fixture-rotating"))


def test_killing_semi_lift():
    """Test p and q select the semi-Killing lift."""
    report, _ = run_service.run(RunConfig(command="killing", p=2, q=1))

    assert report["geometry"] == "RiemannianSplit(p=2,q=1)"
    assert report["lift"]
    assert report["conditions"]


def test_schema():
    """Test the schema command returns the definition schema."""
    report, code = run_service.run(RunConfig(command="schema"))

    assert "d_rules" in report["properties"]
    assert code == EXIT_OK
