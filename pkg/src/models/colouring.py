"""
Colouring Models

Serialisable results of the colouring module: monochromatic-flat reports,
orbit counts and the Ramsey probe.
"""

from typing import Optional

from pydantic import BaseModel, Field


class FlatRecord(BaseModel):
    """A flat by its canonical basis and member points."""

    basis: list[int]
    rank: int = Field(..., ge=0)
    points: list[int]


class MonoReport(BaseModel):
    """
    Maximal monochromatic flats of one colouring.

    `colouring[i]` is the colour of the i-th rank-1 flat in the
    pregeometry's flat order. `e` is the rank of the closure of the union of
    the reported flats and `t_c` their number.
    """

    colouring: list[int]
    flats: list[FlatRecord] = Field(default_factory=list)
    min_rank: int = Field(default=2, ge=1)
    e: int = Field(..., ge=0)

    @property
    def t_c(self) -> int:
        return len(self.flats)


class ColouringCount(BaseModel):
    """Orbit count, exact or a lower bound when the cap was reached."""

    count: int = Field(..., ge=0)
    exact: bool = True

    def __str__(self) -> str:
        return str(self.count) if self.exact else f">={self.count}"


class RamseyLevel(BaseModel):
    """Outcome of the sweep at one rank."""

    n: int
    colourings_checked: int
    avoiding_colouring: Optional[list[int]] = None
    complete: bool = True


class RamseyResult(BaseModel):
    """
    Least rank at which every colouring has a monochromatic flat of the
    target rank, or None when the search stopped first.
    """

    q: int
    l: int
    target_rank: int
    n_max: int
    min_dim: Optional[int] = None
    levels: list[RamseyLevel] = Field(default_factory=list)

    @property
    def status(self) -> str:
        return "found" if self.min_dim is not None else "unknown"
