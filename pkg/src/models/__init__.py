"""
Data Models Package

Pydantic models for everything that crosses a boundary: configs, structure
documents, reports and run events.
"""

from src.models.pregeometry import PregeometryKind, PregeometrySpec
from src.models.structure import (
    ColourEntry,
    ColourRule,
    RelationSymbol,
    StructureDocument,
    ValidationReport,
    Violation,
    Vocabulary,
)
from src.models.experiment import (
    Estimate,
    ExperimentKind,
    ExperimentSpec,
    RunManifest,
    SamplerConfig,
)
from src.models.colouring import (
    ColouringCount,
    FlatRecord,
    MonoReport,
    RamseyLevel,
    RamseyResult,
)
from src.models.audit import (
    RunEvent,
    RunEventBuilder,
    RunEventSeverity,
    RunEventType,
)

__all__ = [
    # Pregeometry
    "PregeometryKind",
    "PregeometrySpec",
    # Structures
    "ColourEntry",
    "ColourRule",
    "RelationSymbol",
    "StructureDocument",
    "ValidationReport",
    "Violation",
    "Vocabulary",
    # Experiments
    "Estimate",
    "ExperimentKind",
    "ExperimentSpec",
    "RunManifest",
    "SamplerConfig",
    # Colouring
    "ColouringCount",
    "FlatRecord",
    "MonoReport",
    "RamseyLevel",
    "RamseyResult",
    # Run events
    "RunEvent",
    "RunEventBuilder",
    "RunEventSeverity",
    "RunEventType",
]
