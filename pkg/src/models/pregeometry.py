"""
Pregeometry Models

Serialisable description of a finite pregeometry. The heavy objects (closure
caches, flat enumerations) live in src.pregeometry; this module only holds
the data that travels through configs, manifests and structure files.

DESIGN DECISION: `rank` is always the matroid rank.
Affine space of rank r lives on GF(q)^(r-1), projective space of rank r is
the set of normalised nonzero vectors of GF(q)^r. `geometric_dimension`
gives the conventional dimension for reports.
"""

from enum import Enum
from typing import Optional

import galois
from pydantic import BaseModel, ConfigDict, Field, model_validator


class PregeometryKind(str, Enum):
    """Supported pregeometry families."""
    TRIVIAL = "trivial"
    LINEAR = "linear"
    AFFINE = "affine"
    PROJECTIVE = "projective"


class PregeometrySpec(BaseModel):
    """
    Parameters of one finite pregeometry.

    Trivial pregeometries carry no field; every other kind needs a prime q.
    """

    model_config = ConfigDict(frozen=True)

    kind: PregeometryKind = Field(
        ...,
        description="Pregeometry family"
    )
    q: Optional[int] = Field(
        default=None,
        ge=2,
        description="Prime field order (absent for trivial)"
    )
    rank: int = Field(
        ...,
        ge=0,
        le=32,
        description="Matroid rank"
    )

    @model_validator(mode='after')
    def validate_field(self) -> 'PregeometrySpec':
        """Field kinds need a prime q; the trivial kind must not have one."""
        if self.kind == PregeometryKind.TRIVIAL:
            if self.q is not None:
                raise ValueError("Trivial pregeometry takes no field order")
            return self
        if self.q is None:
            raise ValueError(f"{self.kind.value} pregeometry needs a field order q")
        if not galois.is_prime(self.q):
            raise ValueError(f"Field order must be prime, got {self.q}")
        return self

    @property
    def geometric_dimension(self) -> int:
        """Dimension in the usual geometric convention (projective/affine offset by one)."""
        if self.kind in (PregeometryKind.AFFINE, PregeometryKind.PROJECTIVE):
            return max(self.rank - 1, 0)
        return self.rank

    @property
    def universe_size(self) -> int:
        """Number of points, computed without building the pregeometry."""
        if self.kind == PregeometryKind.TRIVIAL:
            return self.rank
        q = self.q or 2
        if self.kind == PregeometryKind.LINEAR:
            return q ** self.rank
        if self.kind == PregeometryKind.AFFINE:
            return q ** (self.rank - 1) if self.rank >= 1 else 0
        return (q ** self.rank - 1) // (q - 1)

    def with_rank(self, rank: int) -> 'PregeometrySpec':
        """Same family, different rank."""
        return PregeometrySpec(kind=self.kind, q=self.q, rank=rank)

    def label(self) -> str:
        if self.kind == PregeometryKind.TRIVIAL:
            return f"trivial(rank={self.rank})"
        return f"{self.kind.value}(q={self.q}, rank={self.rank})"
