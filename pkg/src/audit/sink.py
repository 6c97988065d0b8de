"""
Event Sink Interface

DESIGN DECISION: Run events go through an abstract sink.
The harness writes JSON lines next to the outputs; tests use the in-memory
sink. The logger never depends on a concrete backend.
"""

import json
from abc import ABC, abstractmethod
from pathlib import Path

from src.models.audit import RunEvent


class EventSink(ABC):
    """Anything that can persist run events."""

    @abstractmethod
    def append_event(self, event: RunEvent) -> bool:
        """
        Persist one event.

        Returns:
            True if the event was stored
        """
        pass

    def close(self) -> None:
        """Release resources. Default: nothing to do."""
        return None


class InMemoryEventSink(EventSink):
    """Keeps events in a list."""

    def __init__(self) -> None:
        self.events: list[RunEvent] = []

    def append_event(self, event: RunEvent) -> bool:
        self.events.append(event)
        return True


class JsonlEventSink(EventSink):
    """Appends one JSON object per line to a file."""

    def __init__(self, path: Path):
        self._path = Path(path)
        self._path.parent.mkdir(parents=True, exist_ok=True)

    @property
    def path(self) -> Path:
        return self._path

    def append_event(self, event: RunEvent) -> bool:
        line = json.dumps(event.to_log_dict(), sort_keys=True, default=str)
        with self._path.open("a", encoding="utf-8") as fh:
            fh.write(line + "\n")
        return True
