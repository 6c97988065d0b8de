"""
Configuration Management for pregeomzol

Uses pydantic-settings for type-safe configuration from environment variables.

DESIGN DECISION: All resource caps are centralized here.
Every cap-guarded operation reads its default limit from LimitSettings and
also accepts an explicit override, so tests can pin small caps without
touching the environment.
"""

from functools import lru_cache
from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class LimitSettings(BaseSettings):
    """Resource caps for enumeration, search and evaluation."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="PREGEOMZOL_",
        extra="ignore"
    )

    max_assignments: int = Field(
        default=5_000_000,
        ge=1,
        description="Variable bindings a single formula evaluation may try"
    )
    max_quantifier_expansion: int = Field(
        default=16,
        ge=1,
        description="Largest quantifier block evaluated by expansion"
    )
    max_enumeration: int = Field(
        default=250_000,
        ge=1,
        description="Structures an exhaustive enumeration may produce"
    )
    max_flats: int = Field(
        default=2_000_000,
        ge=1,
        description="Flats a single flats_of_rank call may materialise"
    )
    max_tuples: int = Field(
        default=4_000_000,
        ge=1,
        description="Candidate relation tuples a tuple catalog may hold"
    )
    max_colourings: int = Field(
        default=1_000_000,
        ge=1,
        description="Colourings a sweep (Ramsey probe, c0 search) may visit"
    )
    max_solver_nodes: int = Field(
        default=5_000_000,
        ge=1,
        description="Search nodes a single colouring solve may expand"
    )
    max_memory_cells: int = Field(
        default=50_000_000,
        ge=1,
        description="Array cells a vectorised computation may allocate"
    )


class SamplingSettings(BaseSettings):
    """Monte Carlo defaults."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="PREGEOMZOL_SAMPLING_",
        extra="ignore"
    )

    default_samples: int = Field(
        default=500,
        ge=1,
        description="Samples per dimension when a spec does not say"
    )
    default_seed: int = Field(
        default=20240607,
        ge=0,
        lt=2**64,
        description="Seed used when neither spec nor CLI provides one"
    )
    workers: int = Field(
        default=1,
        ge=1,
        le=256,
        description="Worker processes for sampling"
    )
    oracle_pairs_per_structure: int = Field(
        default=12,
        ge=0,
        description="Random flat pairs checked against the CSP oracle per sampled structure"
    )
    confidence_level: float = Field(
        default=0.95,
        gt=0.0,
        lt=1.0,
        description="Confidence level of reported intervals"
    )


class HarnessSettings(BaseSettings):
    """Experiment harness configuration."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="PREGEOMZOL_HARNESS_",
        extra="ignore"
    )

    output_dir: str = Field(
        default="runs",
        description="Directory receiving reports when --out is not given"
    )
    log_level: str = Field(
        default="INFO",
        description="Minimum structlog level"
    )
    log_json: bool = Field(
        default=True,
        description="Render logs as JSON lines (console rendering otherwise)"
    )
    write_event_log: bool = Field(
        default=True,
        description="Persist run events as events.jsonl next to the outputs"
    )

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Accept standard level names only."""
        level = v.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level

    @property
    def output_path(self) -> Path:
        return Path(self.output_dir)


class Settings(BaseSettings):
    """
    Root settings container.

    Aggregates all sub-settings for easy access.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )

    @property
    def limits(self) -> LimitSettings:
        return LimitSettings()

    @property
    def sampling(self) -> SamplingSettings:
        return SamplingSettings()

    @property
    def harness(self) -> HarnessSettings:
        return HarnessSettings()


@lru_cache()
def get_settings() -> Settings:
    """
    Get application settings (cached).

    Call get_settings.cache_clear() to reload after changing the environment.
    """
    return Settings()


def validate_all_settings() -> dict[str, bool | str]:
    """
    Validate all settings are properly configured.

    Returns a dict of {setting_name: is_valid} plus {setting_name_error: message}
    for every group that failed to load.
    """
    results: dict[str, bool | str] = {}
    settings = get_settings()

    for name in ("limits", "sampling", "harness"):
        try:
            getattr(settings, name)
            results[name] = True
        except Exception as e:
            results[name] = False
            results[f"{name}_error"] = str(e)

    return results
