"""Run logging package."""

from src.audit.logger import RunLogger, configure_logging, create_run_id
from src.audit.sink import EventSink, InMemoryEventSink, JsonlEventSink

__all__ = [
    "EventSink",
    "InMemoryEventSink",
    "JsonlEventSink",
    "RunLogger",
    "configure_logging",
    "create_run_id",
]
