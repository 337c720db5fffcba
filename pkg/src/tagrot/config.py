"""Configuration management with Pydantic."""

from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class LoggingConfig(BaseModel):
    """Logging settings."""

    level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"
    structured: bool = Field(
        default=False,
        description="Emit JSON log lines instead of the human-readable format",
    )


class SearchConfig(BaseModel):
    """Maximal green sequence search settings."""

    max_green_length: int = Field(
        default=12,
        ge=1,
        le=64,
        description="Length bound for a single green sequence",
    )
    exhaustive_rank_limit: int = Field(
        default=6,
        ge=1,
        le=12,
        description="Largest rank accepted for exhaustive search",
    )
    workers: int = Field(
        default=1,
        ge=1,
        le=32,
        description="Threads used to search first-step branches in parallel",
    )


class ExplorerConfig(BaseModel):
    """Exchange graph exploration settings."""

    max_vertices: int = Field(default=20_000, ge=1)
    workers: int = Field(
        default=1,
        ge=1,
        le=32,
        description="Threads used to expand a BFS frontier",
    )


class ModelsConfig(BaseModel):
    """Geometric model settings."""

    orbit_certificate_length: int = Field(
        default=50,
        ge=2,
        le=10_000,
        description="Number of pairwise distinct rotates certifying an infinite orbit",
    )


class ProofkitConfig(BaseModel):
    """Bounds of the canonical-triangulation sweep."""

    sweep_max_rank: int = Field(default=8, ge=1, le=20)
    sweep_max_genus: int = Field(default=2, ge=0, le=4)
    sweep_max_boundaries: int = Field(default=3, ge=1, le=6)
    sweep_max_punctures: int = Field(default=2, ge=0, le=6)
    local_search_states: int = Field(
        default=4000,
        ge=1,
        description="Triangulations visited by the best-first search around one arc",
    )


class RandomConfig(BaseModel):
    """Seed for every randomized suite."""

    seed: int = 1729
    samples: int = Field(default=200, ge=1, le=100_000)


class ExportConfig(BaseModel):
    """Artifact writing settings."""

    retry_attempts: int = Field(default=3, ge=1, le=10)
    retry_wait_seconds: float = Field(default=0.2, ge=0.0, le=10.0)
    indent: int | None = Field(default=2, ge=0, le=8)

    @field_validator("indent")
    @classmethod
    def validate_indent(cls, v: int | None) -> int | None:
        """Treat indent 0 as compact output."""
        return v or None


class Settings(BaseSettings):
    """Main configuration."""

    model_config = SettingsConfigDict(
        env_prefix="TAGROT_",
        env_nested_delimiter="__",
    )

    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    search: SearchConfig = Field(default_factory=SearchConfig)
    explorer: ExplorerConfig = Field(default_factory=ExplorerConfig)
    models: ModelsConfig = Field(default_factory=ModelsConfig)
    proofkit: ProofkitConfig = Field(default_factory=ProofkitConfig)
    random: RandomConfig = Field(default_factory=RandomConfig)
    export: ExportConfig = Field(default_factory=ExportConfig)


class ConfigError(Exception):
    """Configuration loading error."""

    pass


def load_config(config_path: str | Path | None = None) -> Settings:
    """Load configuration from YAML file or defaults.

    Args:
        config_path: Path to a YAML file. If None, tries ./tagrot.yaml

    Returns:
        Validated Settings instance

    Raises:
        ConfigError: If configuration is invalid
    """
    config_data: dict[str, Any] = {}

    if config_path:
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"Config file not found: {path}")
        config_data = yaml.safe_load(path.read_text()) or {}
    else:
        for default in [Path("./tagrot.yaml"), Path("./tagrot.yml")]:
            if default.exists():
                config_data = yaml.safe_load(default.read_text()) or {}
                break

    if not isinstance(config_data, dict):
        raise ConfigError(f"Config root must be a mapping, got {type(config_data).__name__}")

    try:
        return Settings(**config_data)
    except Exception as e:
        raise ConfigError(f"Invalid configuration: {e}") from e
