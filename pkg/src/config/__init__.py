"""Configuration package."""

from src.config.settings import (
    HarnessSettings,
    LimitSettings,
    SamplingSettings,
    Settings,
    get_settings,
    validate_all_settings,
)

__all__ = [
    "HarnessSettings",
    "LimitSettings",
    "SamplingSettings",
    "Settings",
    "get_settings",
    "validate_all_settings",
]
