"""Integration tests for the command-line surface."""
import json
import pytest
from cartan_sub import __version__
from cartan_sub.cli.main import main
from cartan_sub.core.errors import EXIT_MATH, EXIT_OK, EXIT_USAGE
from cartan_sub.models.responses import FAILED, PASS, CheckResult, ReportSummary

pytestmark = pytest.mark.integration


def test_version(capsys):
    """Test --version prints the package version."""
    assert main(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out


def test_dof_json(capsys):
    """Test dof prints the characters as JSON."""
    code = main(["dof", "riem-sub", "--p", "2", "--q", "3"])
    report = json.loads(capsys.readouterr().out)

    assert code == EXIT_OK
    assert report["geometry"] == "RiemannianSubmersion"
    assert report["s"][-1] == 5
    assert report["schema_version"] == "v1"


def test_dof_markdown(capsys):
    """Test --format md renders the characters table."""
    code = main(["--format", "md", "dof", "Riemannian", "--n", "3"])
    out = capsys.readouterr().out

    assert code == EXIT_OK
    assert out.startswith("# Cartan characters: Riemannian (n=3)")
    assert "Top character: **3**" in out


def test_dof_is_deterministic(capsys):
    """Test two runs print identical bytes."""
    main(["--seed", "42", "dof", "riem-sub", "--p", "2", "--q", "2"])
    first = capsys.readouterr().out
    main(["--seed", "42", "dof", "riem-sub", "--p", "2", "--q", "2"])

    assert capsys.readouterr().out == first


def test_unknown_geometry(capsys):
    """Test unknown geometries exit 1 with an error payload on stderr."""
    code = main(["dof", "kaehler", "--n", "4"])
    captured = capsys.readouterr()

    assert code == EXIT_USAGE
    assert captured.out == ""
    assert "UnknownGeometryError" in captured.err


def test_invalid_dimension():
    """Test negative dimensions fail validation with exit 1."""
    assert main(["dof", "riem-sub", "--p", "-1", "--q", "2"]) == EXIT_USAGE


def test_unknown_verb():
    """Test click usage errors exit 1, not 2."""
    assert main(["prove-everything"]) == EXIT_USAGE


def test_dimension_guard(capsys):
    """Test the conformal theorem in dimension 3 exits 2."""
    code = main(["theorem", "herglotz-conformal", "--dim", "3"])

    assert code == EXIT_MATH
    assert "DimensionGuardError" in capsys.readouterr().err


def test_identities_riemannian_submersion(capsys):
    """Test the (1, 1) submersion matches its catalog."""
    code = main(["identities", "riem-sub", "--p", "1", "--q", "1"])
    report = json.loads(capsys.readouterr().out)

    assert code == EXIT_OK
    assert report["catalog_only"] == []
    assert report["derived_only"] == []


def test_identities_definition_file(fixtures_dir, capsys):
    """Test a definition file can stand in for a built-in name."""
    code = main(["identities", str(fixtures_dir / "born_rigid_n2.json")])
    report = json.loads(capsys.readouterr().out)

    assert code == EXIT_OK
    assert report["geometry"] == "BornRigid(n=2)"


def test_certificate_round_trip(tmp_path):
    """Test a written certificate replays, and a tampered one exits 2."""
    path = tmp_path / "certs" / "herglotz.json"

    assert main(["--output", str(path), "theorem", "herglotz-homogeneous", "--dim", "2"]) == EXIT_OK
    assert path.exists()
    assert main(["check-certificate", str(path)]) == EXIT_OK

    data = json.loads(path.read_text())
    data["status"] = "FAILED"
    path.write_text(json.dumps(data))
    assert main(["check-certificate", str(path)]) == EXIT_MATH


def test_ellis_irrotational_assumption(capsys):
    """Test --assume reaches the verifier."""
    code = main(["theorem", "ellis-irrotational", "--dim", "3", "--assume", "K=0"])
    certificate = json.loads(capsys.readouterr().out)

    assert code == EXIT_OK
    assert certificate["branches"][0]["conclusion"] == "identity"
    assert certificate["dims"] == {"p": 2}


def test_pde2d(pde_problem, tmp_path, capsys):
    """Test pde2d reports the grid and writes the CSV."""
    csv_path = tmp_path / "grid.csv"
    code = main(["pde2d", "--input", str(pde_problem), "--csv", str(csv_path)])
    report = json.loads(capsys.readouterr().out)

    assert code == EXIT_OK
    assert report["failed_points"] == 0
    assert csv_path.read_text().startswith("x,y,t")


def test_oracle_antisym(capsys):
    """Test the rigidity search exits 0 when no witness exists."""
    code = main(["oracle", "antisym", "--p", "3", "--trials", "50"])
    report = json.loads(capsys.readouterr().out)

    assert code == EXIT_OK
    assert report["witness"] is None


def test_fixture_rotating(capsys):
    """Test the rotating fixture from the command line."""
    code = main(["fixture", "rotating", "--omega", "0.1", "--radius", "0.5", "--radius", "2.0"])
    report = json.loads(capsys.readouterr().out)

    assert code == EXIT_OK
    assert report["radii"] == [0.5, 2.0]
    assert report["s1212_min"] > 0


def test_fixture_light_cylinder():
    """Test samples outside the light cylinder exit 1."""
    assert main(["fixture", "rotating", "--omega", "0.9", "--radius", "2.0"]) == EXIT_USAGE


def test_dictionary(capsys):
    """Test the curvature dictionary prints its components."""
    code = main(["dictionary", "--p", "1", "--q", "1", "--contraction", "scalar"])
    report = json.loads(capsys.readouterr().out)

    assert code == EXIT_OK
    assert report["contraction"] == "scalar"


def test_killing_chain(capsys):
    """Test the Killing chain on Riemannian(2)."""
    assert main(["killing", "--n", "2"]) == EXIT_OK
    assert capsys.readouterr().out


def test_schema(capsys):
    """Test the definition-file schema is printed as JSON."""
    assert main(["--format", "md", "schema"]) == EXIT_OK
    assert "generators" in json.loads(capsys.readouterr().out)["properties"]


def test_report_accepts_verb_options(mocker, capsys):
    """Test `report --all --seed 42` parses and the verb seed reaches the service."""
    service = mocker.patch("cartan_sub.cli.report.ReportService")
    service.return_value.run_all.return_value = ReportSummary(seed=42, truncation=2, checks=[
        CheckResult(name="1 closed forms", status=PASS),
    ])

    code = main(["--seed", "7", "report", "--all", "--seed", "42", "--format", "json"])
    summary = json.loads(capsys.readouterr().out)

    assert code == EXIT_OK
    assert service.call_args.kwargs["seed"] == 42
    assert summary["seed"] == 42


def test_report_failed_check_exit_code(mocker, capsys):
    """Test a failed acceptance check exits with the math code."""
    service = mocker.patch("cartan_sub.cli.report.ReportService")
    service.return_value.run_all.return_value = ReportSummary(seed=42, truncation=2, checks=[
        CheckResult(name="7 herglotz-conformal n=5", status=FAILED, detail="step 1: vorticity"),
    ])

    assert main(["report", "--all", "--seed", "42"]) == EXIT_MATH
    assert json.loads(capsys.readouterr().out)["checks"][0]["status"] == FAILED
