"""
Run Event Models

Every significant step of an experiment run is recorded as a RunEvent.
This provides:
1. Traceability of what a run computed and in which order
2. Debugging information when a cap or invariant fails
3. A machine-readable log next to the report files

DESIGN DECISION: Event logs are append-only. A run never rewrites them.
"""

from datetime import datetime, timezone
from enum import Enum
from typing import Any, Optional
from uuid import UUID, uuid4

from pydantic import BaseModel, Field


class RunEventType(str, Enum):
    """Types of events a run emits."""
    RUN_STARTED = "run_started"
    RUN_FINISHED = "run_finished"
    RUN_FAILED = "run_failed"

    STEP_COMPLETED = "step_completed"
    ESTIMATE_RECORDED = "estimate_recorded"
    OUTPUT_WRITTEN = "output_written"

    RESOURCE_CAP_HIT = "resource_cap_hit"
    INVARIANT_FAILED = "invariant_failed"
    DISCREPANCY_NOTED = "discrepancy_noted"


class RunEventSeverity(str, Enum):
    """Severity level for run events."""
    DEBUG = "debug"
    INFO = "info"
    WARNING = "warning"
    ERROR = "error"
    CRITICAL = "critical"


class RunEvent(BaseModel):
    """A single run event."""

    event_id: UUID = Field(
        default_factory=uuid4,
        description="Unique event identifier"
    )
    timestamp: datetime = Field(
        default_factory=lambda: datetime.now(timezone.utc),
        description="When the event occurred (UTC)"
    )
    event_type: RunEventType
    severity: RunEventSeverity = RunEventSeverity.INFO

    run_id: Optional[UUID] = Field(
        default=None,
        description="Correlates all events of one run"
    )
    experiment: Optional[str] = Field(
        default=None,
        description="Experiment kind"
    )
    description: str = Field(
        ...,
        max_length=500,
    )
    details: dict[str, Any] = Field(default_factory=dict)
    error_message: Optional[str] = None

    def to_log_dict(self) -> dict:
        """Convert to a dictionary suitable for structured logging."""
        return {
            "event_id": str(self.event_id),
            "timestamp": self.timestamp.isoformat(),
            "event_type": self.event_type.value,
            "severity": self.severity.value,
            "run_id": str(self.run_id) if self.run_id else None,
            "experiment": self.experiment,
            "description": self.description,
            "details": self.details,
            "error_message": self.error_message,
        }


class RunEventBuilder:
    """
    Helper class to build run events with common patterns.

    Usage:
        event = RunEventBuilder.run_started(run_id, "sample", spec_hash, seed)
        event = RunEventBuilder.cap_hit(run_id, "sample", "max_tuples", 1000, 4096)
    """

    @staticmethod
    def run_started(run_id: UUID, experiment: str, spec_hash: str, seed: int) -> RunEvent:
        return RunEvent(
            event_type=RunEventType.RUN_STARTED,
            run_id=run_id,
            experiment=experiment,
            description=f"Run started: {experiment}",
            details={"spec_hash": spec_hash, "seed": seed},
        )

    @staticmethod
    def run_finished(
        run_id: UUID,
        experiment: str,
        exit_code: int,
        wall_time_seconds: float,
    ) -> RunEvent:
        return RunEvent(
            event_type=RunEventType.RUN_FINISHED,
            severity=RunEventSeverity.INFO if exit_code == 0 else RunEventSeverity.ERROR,
            run_id=run_id,
            experiment=experiment,
            description=f"Run finished with exit code {exit_code}",
            details={"exit_code": exit_code, "wall_time_seconds": round(wall_time_seconds, 3)},
        )

    @staticmethod
    def run_failed(run_id: UUID, experiment: str, error: Exception) -> RunEvent:
        return RunEvent(
            event_type=RunEventType.RUN_FAILED,
            severity=RunEventSeverity.ERROR,
            run_id=run_id,
            experiment=experiment,
            description=f"Run failed: {type(error).__name__}",
            error_message=str(error)[:1000],
        )

    @staticmethod
    def step_completed(run_id: UUID, experiment: str, step: str, **details: Any) -> RunEvent:
        return RunEvent(
            event_type=RunEventType.STEP_COMPLETED,
            run_id=run_id,
            experiment=experiment,
            description=f"Step completed: {step}",
            details={"step": step, **details},
        )

    @staticmethod
    def estimate_recorded(
        run_id: UUID,
        experiment: str,
        event: str,
        n: int,
        estimate: float,
    ) -> RunEvent:
        return RunEvent(
            event_type=RunEventType.ESTIMATE_RECORDED,
            severity=RunEventSeverity.DEBUG,
            run_id=run_id,
            experiment=experiment,
            description=f"Estimate for {event} at n={n}",
            details={"event": event, "n": n, "estimate": estimate},
        )

    @staticmethod
    def output_written(run_id: UUID, experiment: str, path: str, sha256: str) -> RunEvent:
        return RunEvent(
            event_type=RunEventType.OUTPUT_WRITTEN,
            run_id=run_id,
            experiment=experiment,
            description=f"Output written: {path}",
            details={"path": path, "sha256": sha256},
        )

    @staticmethod
    def cap_hit(
        run_id: UUID,
        experiment: str,
        cap_name: str,
        limit: int,
        observed: Optional[int],
    ) -> RunEvent:
        return RunEvent(
            event_type=RunEventType.RESOURCE_CAP_HIT,
            severity=RunEventSeverity.WARNING,
            run_id=run_id,
            experiment=experiment,
            description=f"Resource cap {cap_name} reached",
            details={"cap_name": cap_name, "limit": limit, "observed": observed},
        )

    @staticmethod
    def invariant_failed(
        run_id: UUID,
        experiment: str,
        message: str,
        details: Optional[dict] = None,
    ) -> RunEvent:
        return RunEvent(
            event_type=RunEventType.INVARIANT_FAILED,
            severity=RunEventSeverity.CRITICAL,
            run_id=run_id,
            experiment=experiment,
            description="Internal invariant failed",
            details=details or {},
            error_message=message,
        )

    @staticmethod
    def discrepancy_noted(run_id: UUID, experiment: str, note: str, **details: Any) -> RunEvent:
        return RunEvent(
            event_type=RunEventType.DISCREPANCY_NOTED,
            severity=RunEventSeverity.WARNING,
            run_id=run_id,
            experiment=experiment,
            description=note[:500],
            details=details,
        )
