"""
Run manifests and config loading.

A config file is either an ExperimentSpec or a RunManifest written by an
earlier run; a manifest is accepted only when its embedded spec still
hashes to the recorded spec_hash.
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from pydantic import ValidationError

from src import __version__
from src.errors import ConfigError
from src.models.experiment import ExperimentSpec, RunManifest

MANIFEST_NAME = "manifest.json"


def build_manifest(
    spec: ExperimentSpec,
    started_at: datetime,
    wall_time_seconds: float,
    exit_code: int,
    outputs: Mapping[str, str],
) -> RunManifest:
    return RunManifest(
        spec=spec,
        spec_hash=spec.spec_hash(),
        seed=spec.sampler.seed,
        tool_version=__version__,
        started_at=started_at,
        wall_time_seconds=max(0.0, wall_time_seconds),
        exit_code=exit_code,
        outputs=dict(sorted(outputs.items())),
    )


def _read_json(path: Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e


def spec_from_data(data: Any) -> ExperimentSpec:
    """
    Raises:
        ConfigError: neither a valid spec nor a consistent manifest
    """
    if not isinstance(data, dict):
        raise ConfigError("Config must be a JSON object")
    try:
        if "spec" in data and "spec_hash" in data:
            manifest = RunManifest.model_validate(data)
            if manifest.spec.spec_hash() != manifest.spec_hash:
                raise ConfigError("Manifest spec does not match its recorded spec_hash")
            return manifest.spec
        return ExperimentSpec.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid experiment config: {e}") from e


def load_spec(path: Union[str, Path]) -> ExperimentSpec:
    return spec_from_data(_read_json(Path(path)))


def apply_overrides(
    spec: ExperimentSpec,
    kind: Optional[str] = None,
    seed: Optional[int] = None,
    colour_rule: Optional[str] = None,
    symmetric_irreflexive: Optional[bool] = None,
    strong: Optional[bool] = None,
) -> ExperimentSpec:
    """
    A copy of spec with command-line overrides applied and re-validated.

    Raises:
        ConfigError: the overridden spec does not validate
    """
    data = spec.model_dump(mode="json")
    sampler = data["sampler"]
    if kind is not None:
        data["kind"] = kind
    if seed is not None:
        sampler["seed"] = seed
    if colour_rule is not None:
        sampler["colour_rule"] = colour_rule
    if symmetric_irreflexive is not None:
        sampler["symmetric_irreflexive"] = symmetric_irreflexive
    if strong is not None:
        sampler["strong"] = strong
    return spec_from_data(data)
