"""
Experiment Models

Everything the harness reads (ExperimentSpec, SamplerConfig) and writes
(Estimate rows, RunManifest).

DESIGN DECISION: An ExperimentSpec is fully serialisable and hashed.
The sha256 of its canonical JSON is stamped on every report row and in the
manifest, and a manifest embeds the spec so a run can be repeated from it.
"""

import hashlib
import json
from datetime import datetime
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from src.models.pregeometry import PregeometryKind, PregeometrySpec
from src.models.structure import ColourRule, RelationSymbol, Vocabulary


class ExperimentKind(str, Enum):
    """Experiments the harness knows how to run."""
    ENUMERATE = "enumerate"
    SAMPLE = "sample"
    CHECK_XI = "check-xi"
    ZERO_ONE = "zero-one"
    UNIQUE_COLOURING = "unique-colouring"
    RAMSEY_MIN_DIM = "ramsey-min-dim"
    EXT_AXIOM = "ext-axiom"
    FIND_U = "find-u"
    VALIDATE = "validate"


class SamplerConfig(BaseModel):
    """
    Parameters of the dimension conditional measure.

    Equal configs produce identical sample streams.
    """

    kind: PregeometryKind = Field(
        default=PregeometryKind.LINEAR,
        description="Pregeometry family"
    )
    q: Optional[int] = Field(
        default=2,
        description="Prime field order (None for trivial)"
    )
    rank: int = Field(
        default=2,
        ge=0,
        description="Matroid rank used when an experiment has no rank range"
    )
    vocabulary: list[RelationSymbol] = Field(
        default_factory=lambda: [RelationSymbol(name="R", arity=2)],
        min_length=1,
    )
    symmetric_irreflexive: bool = False
    l: int = Field(
        default=2,
        ge=2,
        le=16,
        description="Number of colours"
    )
    strong: bool = False
    colour_rule: ColourRule = ColourRule.CLOSURE
    seed: int = Field(
        ...,
        ge=0,
        lt=2**64,
        description="Run seed (mandatory)"
    )
    samples: int = Field(
        default=500,
        ge=1,
        description="Samples per rank"
    )

    @model_validator(mode='after')
    def validate_family(self) -> 'SamplerConfig':
        # Fails early if kind/q disagree.
        self.pregeometry(self.rank)
        return self

    def pregeometry(self, rank: Optional[int] = None) -> PregeometrySpec:
        q = None if self.kind == PregeometryKind.TRIVIAL else self.q
        return PregeometrySpec(
            kind=self.kind,
            q=q,
            rank=self.rank if rank is None else rank,
        )

    def vocab(self) -> Vocabulary:
        return Vocabulary(
            symbols=tuple(self.vocabulary),
            symmetric_irreflexive=self.symmetric_irreflexive,
        )


class ExperimentSpec(BaseModel):
    """
    One experiment, as read from a config file.

    Kind-specific knobs have defaults so a minimal config is just
    {"kind": ..., "sampler": {"seed": ...}}.
    """

    kind: ExperimentKind
    name: str = Field(
        default="",
        max_length=100,
        description="Free-form label for reports"
    )
    sampler: SamplerConfig
    n_min: Optional[int] = Field(default=None, ge=0)
    n_max: Optional[int] = Field(default=None, ge=0)
    events: list[str] = Field(
        default_factory=lambda: ["relations_nonempty"],
        description="Named events or s-expression sentences (zero-one)"
    )
    structure_path: Optional[str] = Field(
        default=None,
        description="Structure JSON file (validate)"
    )
    target_rank: int = Field(default=2, ge=1)
    ramsey_colours: Optional[int] = Field(
        default=None,
        ge=1,
        description="Colour count for the Ramsey probe (defaults to sampler.l)"
    )
    search_budget: int = Field(
        default=200,
        ge=1,
        description="Random structures tried by find-u"
    )
    ambient_rank: Optional[int] = Field(
        default=None,
        ge=1,
        description="Ambient rank of the c0/B construction and the weak xi report"
    )
    output_dir: Optional[str] = None

    @model_validator(mode='after')
    def validate_range(self) -> 'ExperimentSpec':
        if self.n_min is not None and self.n_max is not None and self.n_min > self.n_max:
            raise ValueError(f"n_min={self.n_min} exceeds n_max={self.n_max}")
        if self.kind == ExperimentKind.VALIDATE and not self.structure_path:
            raise ValueError("validate experiments need structure_path")
        return self

    @property
    def ranks(self) -> list[int]:
        """Ranks swept by the experiment (a single rank when no range is set)."""
        lo = self.n_min if self.n_min is not None else self.sampler.rank
        hi = self.n_max if self.n_max is not None else max(lo, self.sampler.rank)
        return list(range(lo, hi + 1))

    def canonical_json(self) -> str:
        """Key-sorted JSON without output locations (they do not change results)."""
        data = self.model_dump(mode="json", exclude={"output_dir"})
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    def spec_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


class Estimate(BaseModel):
    """A probability estimate for one event at one rank."""

    event: str
    n: int = Field(..., ge=0)
    estimate: float = Field(..., ge=0.0, le=1.0)
    ci_low: float = Field(..., ge=0.0, le=1.0)
    ci_high: float = Field(..., ge=0.0, le=1.0)
    samples: int = Field(..., ge=0, description="Samples that produced a verdict")
    successes: int = Field(..., ge=0)
    budget_exceeded: int = Field(default=0, ge=0)
    exact: bool = Field(default=False, description="Computed from the exact measure")
    seed: int

    @model_validator(mode='after')
    def validate_interval(self) -> 'Estimate':
        """The interval must contain the point estimate."""
        if not (self.ci_low - 1e-12 <= self.estimate <= self.ci_high + 1e-12):
            raise ValueError(
                f"Interval [{self.ci_low}, {self.ci_high}] does not contain {self.estimate}"
            )
        if self.successes > self.samples:
            raise ValueError("successes exceed samples")
        return self


class RunManifest(BaseModel):
    """Provenance record written next to every run's outputs."""

    spec: ExperimentSpec
    spec_hash: str
    seed: int
    tool_version: str
    started_at: datetime
    wall_time_seconds: float = Field(..., ge=0.0)
    exit_code: int
    outputs: dict[str, str] = Field(
        default_factory=dict,
        description="Output file name -> sha256"
    )
