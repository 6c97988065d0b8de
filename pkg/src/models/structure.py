"""
Structure Models

Vocabularies, validation results and the JSON document format of coloured
and colourable structures.

DESIGN DECISION: Violations are data.
The validator never raises on a bad colouring; it returns a list of
Violation records, one per literally false condition, for human review.
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.pregeometry import PregeometryKind, PregeometrySpec


# =============================================================================
# VOCABULARY
# =============================================================================

class RelationSymbol(BaseModel):
    """A relation symbol of the relational part of the language."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(
        ...,
        min_length=1,
        max_length=32,
        description="Symbol name, e.g. 'R'"
    )
    arity: int = Field(
        ...,
        ge=2,
        le=8,
        description="Arity, at least 2"
    )

    @field_validator('name')
    @classmethod
    def validate_name(cls, v: str) -> str:
        """Names must be plain identifiers (they appear in formulas)."""
        v = v.strip()
        if not v.isidentifier():
            raise ValueError(f"Relation name must be an identifier: {v!r}")
        return v


class Vocabulary(BaseModel):
    """
    Finite relational vocabulary.

    The first symbol is treated as R_1 (a symbol of minimal arity) by the
    formula builders, so `minimal_symbol` is what they ask for.
    """

    model_config = ConfigDict(frozen=True)

    symbols: tuple[RelationSymbol, ...] = Field(
        ...,
        min_length=1,
        description="Relation symbols"
    )
    symmetric_irreflexive: bool = Field(
        default=False,
        description="Interpret every symbol as symmetric with pairwise distinct entries"
    )

    @model_validator(mode='after')
    def validate_unique_names(self) -> 'Vocabulary':
        names = [s.name for s in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError(f"Duplicate relation names: {names}")
        return self

    @property
    def rho(self) -> int:
        """Maximal arity."""
        return max(s.arity for s in self.symbols)

    @property
    def minimal_symbol(self) -> RelationSymbol:
        """First symbol of minimal arity."""
        return min(self.symbols, key=lambda s: s.arity)

    def symbol(self, name: str) -> RelationSymbol:
        for s in self.symbols:
            if s.name == name:
                return s
        raise KeyError(name)

    @classmethod
    def binary(cls, name: str = "R", symmetric_irreflexive: bool = False) -> 'Vocabulary':
        """Single binary symbol; the common case."""
        return cls(
            symbols=(RelationSymbol(name=name, arity=2),),
            symmetric_irreflexive=symmetric_irreflexive,
        )


class ColourRule(str, Enum):
    """
    How condition (4) decides whether a related tuple is admissible.

    CLOSURE: the closure of the tuple must contain two colours.
    TUPLE:   two entries of the tuple itself must carry different colours.
    """
    CLOSURE = "closure"
    TUPLE = "tuple"


# =============================================================================
# VALIDATION
# =============================================================================

class Violation(BaseModel):
    """One literally false colouring condition."""

    condition: int = Field(
        ...,
        ge=1,
        le=5,
        description="Condition number 1-5"
    )
    symbol: Optional[str] = Field(
        default=None,
        description="Relation symbol of the offending tuple"
    )
    entries: Optional[list[int]] = Field(
        default=None,
        description="Offending tuple"
    )
    points: list[int] = Field(
        default_factory=list,
        description="Witness points (e.g. two independent points of equal colour)"
    )
    note: str = Field(
        ...,
        max_length=300,
        description="Human-readable explanation"
    )


class ValidationReport(BaseModel):
    """Result of validating one structure."""

    strong: bool
    colour_rule: ColourRule = ColourRule.CLOSURE
    violations: list[Violation] = Field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    @property
    def violation_count(self) -> int:
        return len(self.violations)

    @property
    def conditions(self) -> list[int]:
        """Sorted distinct condition numbers that failed."""
        return sorted({v.condition for v in self.violations})


# =============================================================================
# JSON DOCUMENT
# =============================================================================

class ColourEntry(BaseModel):
    """Colour of one rank-1 flat, keyed by its canonical basis."""

    basis: list[int] = Field(..., min_length=1)
    colour: int = Field(..., ge=1)


class StructureDocument(BaseModel):
    """
    On-disk form of a (coloured) structure.

    `l` and `colours` are absent for colourable (colour-free) structures.
    Relations list every stored tuple; in symmetric mode only one sorted
    representative per orbit is written.
    """

    kind: PregeometryKind
    q: Optional[int] = None
    rank: int = Field(..., ge=0)
    l: Optional[int] = Field(default=None, ge=1)
    reduct_level: Optional[int] = Field(default=None, ge=0)
    universe_basis: Optional[list[int]] = Field(
        default=None,
        description="Basis of the closed universe when it is a proper flat"
    )
    mode: str = Field(
        default="ordered",
        pattern="^(ordered|symmetric_irreflexive)$",
    )
    vocabulary: list[RelationSymbol] = Field(..., min_length=1)
    colours: Optional[list[ColourEntry]] = None
    relations: dict[str, list[list[int]]] = Field(default_factory=dict)

    @model_validator(mode='after')
    def validate_colours(self) -> 'StructureDocument':
        if (self.l is None) != (self.colours is None):
            raise ValueError("'l' and 'colours' must be given together")
        if self.colours and self.l is not None:
            bad = [c.colour for c in self.colours if c.colour > self.l]
            if bad:
                raise ValueError(f"Colours exceed l={self.l}: {sorted(set(bad))}")
        names = {s.name for s in self.vocabulary}
        unknown = set(self.relations) - names
        if unknown:
            raise ValueError(f"Relations for unknown symbols: {sorted(unknown)}")
        return self

    @property
    def pregeometry(self) -> PregeometrySpec:
        return PregeometrySpec(kind=self.kind, q=self.q, rank=self.rank)

    @property
    def vocab(self) -> Vocabulary:
        return Vocabulary(
            symbols=tuple(self.vocabulary),
            symmetric_irreflexive=self.mode == "symmetric_irreflexive",
        )
