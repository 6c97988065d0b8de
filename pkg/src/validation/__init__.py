"""Validation package."""

from src.validation.validator import (
    StructureValidator,
    is_valid,
    validate,
    validate_colouring_fn,
)

__all__ = [
    "StructureValidator",
    "is_valid",
    "validate",
    "validate_colouring_fn",
]
