"""
Report writers.

DESIGN DECISION: Every output file is written atomically.
The content goes to a temporary file in the target directory and is moved
into place with os.replace, so a crashed run never leaves a half-written
report behind. The replace step is retried on OSError.

Data files are byte-deterministic: JSON is key-sorted, CSV rows keep the
caller's order, and nothing time-dependent goes into either.
"""

import csv
import hashlib
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import structlog
from tenacity import retry, retry_if_exception_type, stop_after_attempt, wait_exponential

logger = structlog.get_logger(__name__)


@retry(
    stop=stop_after_attempt(3),
    wait=wait_exponential(multiplier=0.1, min=0.1, max=2),
    retry=retry_if_exception_type(OSError),
    reraise=True,
)
def _replace(source: Path, target: Path) -> None:
    os.replace(source, target)


def write_text_atomic(path: Path, text: str) -> str:
    """Write text atomically and return its sha256."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = text.encode("utf-8")
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    tmp = Path(tmp_name)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        _replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    digest = hashlib.sha256(data).hexdigest()
    logger.debug("output_written", path=str(path), bytes=len(data), sha256=digest)
    return digest


def to_json_text(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, default=str) + "\n"


def write_json(path: Path, data: Any) -> str:
    return write_text_atomic(path, to_json_text(data))


def to_csv_text(fieldnames: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(row.get(k)) for k in fieldnames})
    return buffer.getvalue()


def write_csv(path: Path, fieldnames: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> str:
    return write_text_atomic(path, to_csv_text(fieldnames, rows))


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(round(value, 12))
    return value


def file_sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
