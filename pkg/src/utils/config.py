"""Pydantic-based configuration management for Entropy Boundary Fluxes.

This module provides centralized configuration using Pydantic models with
support for environment variables, .env files, and sensible defaults.

Example usage:
    from src.utils.config import get_settings

    settings = get_settings()
    print(settings.scheme.p)
    print(settings.reference.cache_dir)
"""

from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Environment(str, Enum):
    """Deployment environment."""

    DEVELOPMENT = "development"
    STAGING = "staging"
    PRODUCTION = "production"


class LogLevel(str, Enum):
    """Logging level."""

    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class SchemeSettings(BaseSettings):
    """Configuration for the spatial discretization.

    Attributes:
        p: Half-order of the interior flux (order 2p).
        q: Boundary order; None means the maximum 2p-1.
        gamma: Ratio of specific heats for Euler runs.
        alpha_kind: Dissipation steering, constant weight or jump sensor.
        alpha_const: Blend weight for the constant provider.
        jump_c: Jump sensor gain C.
        jump_eps: Jump sensor regularization epsilon.
        swap_dissipative_arguments: Feed g right-state-first at the (1,0) entry.
    """

    model_config = SettingsConfigDict(env_prefix="SCHEME_")

    p: int = Field(default=3, ge=1, le=8)
    q: int | None = Field(default=None, ge=1)
    gamma: float = Field(default=1.4, gt=1.0)
    alpha_kind: Literal["constant", "jump"] = "constant"
    alpha_const: float = Field(default=0.0, ge=0.0, le=1.0)
    jump_c: float = Field(default=1.0, gt=0.0)
    jump_eps: float = Field(default=1e-12, gt=0.0)
    swap_dissipative_arguments: bool = False

    @model_validator(mode="after")
    def validate_boundary_order(self) -> "SchemeSettings":
        """Ensure q does not exceed 2p-1."""
        if self.q is not None and self.q > 2 * self.p - 1:
            raise ValueError(f"q={self.q} exceeds 2p-1={2 * self.p - 1}")
        return self

    @property
    def boundary_order(self) -> int:
        """Boundary order with the default filled in."""
        return self.q if self.q is not None else 2 * self.p - 1


class TimeSettings(BaseSettings):
    """Configuration for the time loop.

    Attributes:
        cfl: CFL number lambda.
        t_end: Final time.
    """

    model_config = SettingsConfigDict(env_prefix="TIME_")

    cfl: float = Field(default=0.25, gt=0.0, le=2.0)
    t_end: float = Field(default=10.0, ge=0.0)


class OutputSettings(BaseSettings):
    """Configuration for experiment output paths and formats.

    Attributes:
        base_path: Root directory for all experiment output.
        svg: Whether to render SVG plots next to the tables.
        table_format: Tabular format for series and fields.
    """

    model_config = SettingsConfigDict(env_prefix="OUTPUT_")

    base_path: Path = Field(default=Path("./results"))
    svg: bool = False
    table_format: Literal["csv", "parquet"] = "csv"

    def experiment_path(self, name: str) -> Path:
        """Get the output directory for one experiment."""
        return self.base_path / name


class ReferenceSettings(BaseSettings):
    """Configuration for the ENO2 reference solver and its cache.

    Attributes:
        cache_dir: Directory holding cached reference fields.
        n_fine: Cell count of the reference grid.
        t_end: End time of the pulse problem.
        cfl: CFL number of the reference run.
        domain: Interval of the pulse problem.
    """

    model_config = SettingsConfigDict(env_prefix="REFERENCE_")

    cache_dir: Path = Field(default=Path("./data/reference"))
    n_fine: int = Field(default=16384, ge=16)
    t_end: float = Field(default=10.0, ge=0.0)
    cfl: float = Field(default=0.5, gt=0.0, le=1.0)
    domain: tuple[float, float] = (0.0, 10.0)


class LoggingSettings(BaseSettings):
    """Configuration for structured logging.

    Attributes:
        level: Minimum log level to output.
        format: Log output format (json for production, console for development).
        include_timestamps: Whether to include timestamps in log output.
        log_file: Optional file path for log output.
    """

    model_config = SettingsConfigDict(env_prefix="LOG_")

    level: LogLevel = LogLevel.INFO
    format: Literal["json", "console"] = "console"
    include_timestamps: bool = True
    log_file: Path | None = None


class Settings(BaseSettings):
    """Main application settings combining all configuration sections.

    This is the primary configuration class. Use get_settings() to obtain
    a cached instance.

    Attributes:
        environment: Current deployment environment.
        app_name: Application name for logging and identification.
        debug: Enable debug mode (more verbose logging, etc.).
        scheme: Spatial discretization configuration.
        time: Time loop configuration.
        output: Output configuration.
        reference: Reference solver configuration.
        logging: Logging configuration.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="EBF_",
        env_nested_delimiter="__",
        extra="ignore",
    )

    environment: Environment = Environment.DEVELOPMENT
    app_name: str = "entropy-boundary-fluxes"
    debug: bool = False

    scheme: SchemeSettings = Field(default_factory=SchemeSettings)
    time: TimeSettings = Field(default_factory=TimeSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)
    reference: ReferenceSettings = Field(default_factory=ReferenceSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    @model_validator(mode="after")
    def adjust_settings_for_environment(self) -> "Settings":
        """Adjust settings based on environment."""
        if self.environment == Environment.DEVELOPMENT:
            if not self.debug:
                object.__setattr__(self, "debug", True)
            if self.logging.format != "console":
                self.logging.format = "console"
        elif self.environment == Environment.PRODUCTION:
            if self.logging.format != "json":
                self.logging.format = "json"
            if self.debug:
                object.__setattr__(self, "debug", False)
        return self

    def ensure_directories(self) -> None:
        """Create necessary directories if they don't exist."""
        for directory in (self.output.base_path, self.reference.cache_dir):
            directory.mkdir(parents=True, exist_ok=True)


@lru_cache
def get_settings() -> Settings:
    """Get cached application settings.

    Returns:
        Singleton Settings instance loaded from environment and .env file.
    """
    return Settings()


def clear_settings_cache() -> None:
    """Clear the settings cache to force reload.

    Useful for testing or when configuration needs to be reloaded.
    """
    get_settings.cache_clear()
