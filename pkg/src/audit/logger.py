"""
Run Logger

DESIGN DECISION: Every harness milestone is logged as a RunEvent.
This provides:
1. Complete traceability of a run
2. Debugging capability when a cap or invariant fails
3. A persisted event log beside the reports

The run logger:
- Always logs locally through structlog
- Persists to an EventSink when one is attached
- Gracefully handles sink failures (never crashes a run)
"""

import logging
import sys
from typing import Optional
from uuid import UUID, uuid4

import structlog

from src.audit.sink import EventSink
from src.models.audit import RunEvent, RunEventBuilder, RunEventSeverity


def configure_logging(level: str = "INFO", json_output: bool = True) -> None:
    """
    Configure structlog for the process.

    Library modules only call structlog.get_logger(__name__); the harness
    and CLI call this once at startup.
    """
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, level.upper(), logging.INFO),
        force=True,
    )
    renderer = (
        structlog.processors.JSONRenderer()
        if json_output
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )


class RunLogger:
    """
    Central run logging service.

    Logs events both to:
    1. Structured local log (stderr)
    2. The attached sink (events.jsonl for harness runs)
    """

    def __init__(
        self,
        experiment: str,
        sink: Optional[EventSink] = None,
        run_id: Optional[UUID] = None,
    ):
        self._experiment = experiment
        self._sink = sink
        self._run_id = run_id or create_run_id()
        self._logger = structlog.get_logger("pregeomzol.run")

    @property
    def run_id(self) -> UUID:
        return self._run_id

    def log(self, event: RunEvent) -> bool:
        """
        Log a run event.

        Always logs locally. Persists to the sink if available.

        Returns True if the sink write succeeded (or no sink is attached).
        """
        log_dict = event.to_log_dict()

        if event.severity in (RunEventSeverity.ERROR, RunEventSeverity.CRITICAL):
            self._logger.error("run_event", **log_dict)
        elif event.severity == RunEventSeverity.WARNING:
            self._logger.warning("run_event", **log_dict)
        elif event.severity == RunEventSeverity.DEBUG:
            self._logger.debug("run_event", **log_dict)
        else:
            self._logger.info("run_event", **log_dict)

        if self._sink:
            try:
                return self._sink.append_event(event)
            except Exception as e:
                self._logger.error(
                    "event_sink_failed",
                    error=str(e),
                    event_id=str(event.event_id),
                )
                return False

        return True

    def run_started(self, spec_hash: str, seed: int) -> None:
        self.log(RunEventBuilder.run_started(self._run_id, self._experiment, spec_hash, seed))

    def run_finished(self, exit_code: int, wall_time_seconds: float) -> None:
        self.log(RunEventBuilder.run_finished(
            self._run_id, self._experiment, exit_code, wall_time_seconds,
        ))

    def run_failed(self, error: Exception) -> None:
        self.log(RunEventBuilder.run_failed(self._run_id, self._experiment, error))

    def step(self, step: str, **details) -> None:
        self.log(RunEventBuilder.step_completed(self._run_id, self._experiment, step, **details))

    def estimate(self, event: str, n: int, estimate: float) -> None:
        self.log(RunEventBuilder.estimate_recorded(
            self._run_id, self._experiment, event, n, estimate,
        ))

    def output(self, path: str, sha256: str) -> None:
        self.log(RunEventBuilder.output_written(self._run_id, self._experiment, path, sha256))

    def cap_hit(self, cap_name: str, limit: int, observed: Optional[int]) -> None:
        self.log(RunEventBuilder.cap_hit(
            self._run_id, self._experiment, cap_name, limit, observed,
        ))

    def invariant_failed(self, message: str, details: Optional[dict] = None) -> None:
        self.log(RunEventBuilder.invariant_failed(
            self._run_id, self._experiment, message, details,
        ))

    def discrepancy(self, note: str, **details) -> None:
        self.log(RunEventBuilder.discrepancy_noted(
            self._run_id, self._experiment, note, **details,
        ))


def create_run_id() -> UUID:
    """
    Create a new run ID for correlating the events of one run.
    """
    return uuid4()
