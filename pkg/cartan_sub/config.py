"""Application configuration."""
from pathlib import Path
from typing import Any, Dict, Optional
import yaml
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application
    app_name: str = Field(default="cartan-submersions")
    app_version: str = Field(default="1.0.0")
    environment: str = Field(default="development")
    log_level: str = Field(default="INFO")

    # Symbolic engine
    truncation_order: int = Field(
        default=2,
        description="Maximal covariant derivative order kept on invariants"
    )

    # Runs
    threads: int = Field(default=4, description="Worker threads for report --all")
    seed: int = Field(default=42, description="Seed for every numeric oracle")
    output_format: str = Field(default="json", description="Report format: json or md")
    run_config_path: str = Field(
        default="config.yaml",
        description="YAML file with the default report --all parameters"
    )

    # Oracles
    rigidity_trials: int = Field(default=10000)
    random_assignments: int = Field(default=200)

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="CARTAN_SUB_",
        case_sensitive=False,
        extra="allow"
    )

    @field_validator("output_format", mode="before")
    @classmethod
    def parse_output_format(cls, v):
        """Normalize the report format."""
        if v is None or v == "":
            return "json"
        value = str(v).strip().lower()
        if value not in ("json", "md"):
            raise ValueError(f"output_format must be 'json' or 'md', got '{v}'")
        return value

    @field_validator("threads", mode="before")
    @classmethod
    def parse_threads(cls, v):
        """Worker count must be positive."""
        value = int(v)
        if value < 1:
            raise ValueError("threads must be >= 1")
        return value

    @field_validator("truncation_order", mode="before")
    @classmethod
    def parse_truncation(cls, v):
        """Truncation order must allow at least one derivative."""
        value = int(v)
        if value < 1:
            raise ValueError("truncation_order must be >= 1")
        return value

    @property
    def is_production(self) -> bool:
        return self.environment.lower() == "production"

    def load_run_parameters(self, path: Optional[str] = None) -> Dict[str, Any]:
        """Load the report --all parameters from YAML."""
        config_file = Path(path or self.run_config_path)
        if not config_file.exists():
            return {}
        with config_file.open("r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle) or {}
        if not isinstance(data, dict):
            raise ValueError(f"{config_file} must contain a mapping")
        return data


# Create settings instance
settings = Settings()
