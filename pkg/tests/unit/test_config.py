"""Unit tests for configuration."""
import os
import pytest
from pydantic import ValidationError
from cartan_sub.config import Settings

pytestmark = pytest.mark.unit


def test_settings_from_env():
    """Test settings loading from environment."""
    orig = os.environ.get("CARTAN_SUB_TRUNCATION_ORDER")
    os.environ["CARTAN_SUB_TRUNCATION_ORDER"] = "3"

    try:
        settings = Settings()

        assert settings.truncation_order == 3
        assert settings.threads == 2
        assert settings.seed == 42
        assert settings.environment == "test"
    finally:
        if orig is not None:
            os.environ["CARTAN_SUB_TRUNCATION_ORDER"] = orig
        else:
            del os.environ["CARTAN_SUB_TRUNCATION_ORDER"]


def test_output_format_normalized():
    """Test the report format is lower-cased and validated."""
    assert Settings(output_format=" MD ").output_format == "md"
    assert Settings(output_format="").output_format == "json"
    with pytest.raises(ValidationError):
        Settings(output_format="html")


def test_threads_positive():
    """Test zero workers are rejected."""
    with pytest.raises(ValidationError):
        Settings(threads=0)


def test_truncation_positive():
    """Test truncation order zero is rejected."""
    with pytest.raises(ValidationError):
        Settings(truncation_order=0)


def test_is_production():
    """Test the production switch."""
    assert Settings(environment="Production").is_production
    assert not Settings(environment="test").is_production


def test_load_run_parameters(tmp_path):
    """Test the YAML run parameters load as a mapping."""
    path = tmp_path / "run.yaml"
    path.write_text("numerics:\n  pde_step: 0.25\n")

    data = Settings().load_run_parameters(str(path))

    assert data == {"numerics": {"pde_step": 0.25}}


def test_load_run_parameters_missing(tmp_path):
    """Test a missing file gives no parameters."""
    assert Settings().load_run_parameters(str(tmp_path / "absent.yaml")) == {}


def test_load_run_parameters_not_mapping(tmp_path):
    """Test a YAML list is rejected."""
    path = tmp_path / "run.yaml"
    path.write_text("- 1\n- 2\n")

    with pytest.raises(ValueError):
        Settings().load_run_parameters(str(path))


def test_repository_run_parameters():
    """Test the shipped config.yaml names every report section."""
    from pathlib import Path
    path = Path(__file__).parent.parent.parent / "config.yaml"
    data = Settings().load_run_parameters(str(path))

    for section in ("identities", "dof", "dictionary", "theorems", "weyl", "killing", "numerics"):
        assert section in data
