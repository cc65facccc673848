"""Configuration management for qgauss."""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class NumericsConfig(BaseModel):
    """Numerical policy shared by the solvers."""

    density_floor: float = Field(
        default=1e-12, gt=0.0, lt=1.0, description="Floor relative to max density"
    )
    stability_factor: float = Field(
        default=0.1, gt=0.0, description="C in dt <= C*m*dx^2/hbar"
    )
    norm_tolerance: float = Field(
        default=1e-6, gt=0.0, description="Tolerance for normalization preconditions"
    )
    renormalize_tolerance: float = Field(
        default=1e-12, gt=0.0, description="Norm drift that triggers renormalization"
    )
    blowup_limit: float = Field(
        default=1e12, gt=0.0, description="Largest admissible field magnitude"
    )
    caustic_velocity: float = Field(
        default=1e3, gt=0.0, description="Velocity that flags an incipient caustic"
    )
    caustic_density_factor: float = Field(
        default=1e3, gt=1.0, description="Multiple of the floor treated as a node"
    )
    support_decades: float = Field(
        default=6.0, gt=0.0, description="Width of the support window in decades"
    )
    filter_strength: float = Field(
        default=36.0, ge=0.0, description="Filter exponent at k_max, 0 disables"
    )
    filter_order: int = Field(
        default=36, ge=2, description="Order of the exponential step filter"
    )


class LoggingConfig(BaseModel):
    """Logging configuration."""

    level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        default="INFO", description="Log level"
    )
    format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log format string",
    )


class Config(BaseSettings):
    """Main application configuration."""

    numerics: NumericsConfig = Field(default_factory=NumericsConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    out_dir: Path = Field(
        default=Path("qgauss-out"), description="Default root for scenario output"
    )
    jobs: int = Field(default=1, ge=1, description="Default batch concurrency")
    debug: bool = Field(default=False, description="Enable debug mode")

    model_config = SettingsConfigDict(
        env_prefix="QGAUSS_",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
    )


# Global configuration instance
config = Config()
