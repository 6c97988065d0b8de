"""
Colour capacity of a pregeometry family.

D(A) is the number of rank-1 flats inside a flat A. For the supported
families D depends only on rank(A), so t(d) has a closed form:

    linear, projective   (q^d - 1) / (q - 1)
    affine               q^(d-1) for d >= 1, 0 for d = 0
    trivial              d

t is the largest d with t(d) <= l. Strongly l-coloured structures can only
relate tuples of rank <= t, so relations are forced empty when t < 2.
"""

from typing import Optional

from pydantic import BaseModel, Field

from src.errors import DomainError, PreconditionError
from src.models.pregeometry import PregeometryKind
from src.pregeometry.base import Pregeometry


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def t_of(kind: PregeometryKind, q: Optional[int], d: int) -> int:
    """D of a rank-d flat in the given family."""
    if d < 0:
        raise DomainError(f"Rank must be non-negative, got {d}")
    if kind == PregeometryKind.TRIVIAL:
        return d
    if q is None:
        raise DomainError(f"{kind.value} family needs a field order")
    if kind == PregeometryKind.AFFINE:
        return q ** (d - 1) if d >= 1 else 0
    return (q ** d - 1) // (q - 1)


class CapacityTable(BaseModel):
    """t(d) for d = 0..t+1 together with t and k0 = t(l+1) * l."""

    kind: PregeometryKind
    q: Optional[int] = None
    l: int = Field(..., ge=2)
    t_values: list[int]
    t: int = Field(..., ge=0)
    k0: int = Field(..., ge=0)

    @property
    def strong_relations_possible(self) -> bool:
        """Strongly coloured structures can carry related tuples only when t >= 2."""
        return self.t >= 2


def t_threshold(kind: PregeometryKind, q: Optional[int], l: int) -> tuple[list[int], int]:
    """
    (t(0..t+1), t) for the family.

    t(d) is strictly increasing in d for every supported family, so the scan
    stops at the first d with t(d) > l.
    """
    if l < 2:
        raise PreconditionError(f"Colour count must be at least 2, got {l}")
    values = [t_of(kind, q, 0)]
    d = 0
    while values[-1] <= l:
        d += 1
        values.append(t_of(kind, q, d))
    return values, d - 1


def capacity_table(kind: PregeometryKind, q: Optional[int], l: int) -> CapacityTable:
    values, t = t_threshold(kind, q, l)
    return CapacityTable(
        kind=kind,
        q=q,
        l=l,
        t_values=values,
        t=t,
        k0=t_of(kind, q, l + 1) * l,
    )


def intersection_identity_holds(
    pg: Pregeometry,
    a: int,
    vs: tuple[int, ...],
    ws: tuple[int, ...],
) -> bool:
    """cl(a, v̄) ∩ cl(a, w̄) = cl(a) for an independent set {a} ∪ v̄ ∪ w̄."""
    if not pg.is_independent((a,) + tuple(vs) + tuple(ws)):
        raise PreconditionError("a, v̄, w̄ must form an independent set")
    left = pg.closure((a,) + tuple(vs)).points
    right = pg.closure((a,) + tuple(ws)).points
    return left & right == pg.closure((a,)).points
