"""
Colouring constraint problems.

DESIGN DECISION: Variables are the rank-1 flats of a structure's universe.
Every related tuple becomes one constraint over flat indices:

- weak, closure rule:  NotAllEqual over the flats inside cl(tuple)
- weak, tuple rule:    NotAllEqual over the flats of the tuple's entries
- strong:              AllDifferent over the flats inside cl(tuple)

A tuple inside closure(∅) or a single rank-1 flat can never be admissible;
it becomes an uncolourable marker instead of a constraint. So does an
AllDifferent over more than l flats.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import structlog

from src.models.structure import ColourRule
from src.structures.structure import AnyStructure, relational_part

logger = structlog.get_logger(__name__)


class ConstraintKind(str, Enum):
    NOT_ALL_EQUAL = "nae"
    ALL_DIFFERENT = "alldiff"


@dataclass(frozen=True)
class FlatConstraint:
    """One constraint over pg flat indices, with the tuple it came from."""

    kind: ConstraintKind
    flats: tuple[int, ...]
    origin: Optional[tuple[str, tuple[int, ...]]] = None


@dataclass(frozen=True)
class ColourCSP:
    """
    Colouring problem of one relational structure.

    `variables` are pg flat indices of the universe's rank-1 flats;
    `markers` name the related tuples that no colouring can admit.
    """

    flat_count: int
    variables: tuple[int, ...]
    l: int
    strong: bool
    constraints: tuple[FlatConstraint, ...] = ()
    markers: tuple[str, ...] = field(default=())

    @property
    def unsat_reasons(self) -> list[str]:
        """Markers plus every AllDifferent over more than l flats."""
        reasons = list(self.markers)
        for c in self.constraints:
            if c.kind == ConstraintKind.ALL_DIFFERENT and len(c.flats) > self.l:
                reasons.append(f"alldiff over {len(c.flats)} flats exceeds l={self.l}")
        return reasons

    @property
    def is_trivially_unsat(self) -> bool:
        return bool(self.unsat_reasons)

    def with_constraint(self, constraint: FlatConstraint) -> 'ColourCSP':
        """A copy with one more constraint (used by the same-colour oracle)."""
        return replace(self, constraints=self.constraints + (constraint,))

    def with_l(self, l: int) -> 'ColourCSP':
        return replace(self, l=l)


def build_csp(
    s: AnyStructure,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> ColourCSP:
    """Translate the relations of s into flat constraints (colours of s are ignored)."""
    rel = relational_part(s)
    pg = rel.pg
    reasons: list[str] = []
    seen: set[tuple[ConstraintKind, tuple[int, ...]]] = set()
    constraints: list[FlatConstraint] = []

    for name, tup in rel.all_tuples():
        closure = pg.closure(tup)
        if closure.rank <= 1:
            reasons.append(f"{name}{tup} spans rank {closure.rank}")
            continue
        if strong:
            kind = ConstraintKind.ALL_DIFFERENT
            flats = tuple(pg.flat_indices_in(closure.points))
        elif colour_rule == ColourRule.TUPLE:
            kind = ConstraintKind.NOT_ALL_EQUAL
            flats = tuple(pg.flat_indices_in(tup))
        else:
            kind = ConstraintKind.NOT_ALL_EQUAL
            flats = tuple(pg.flat_indices_in(closure.points))
        if (kind, flats) in seen:
            continue
        seen.add((kind, flats))
        constraints.append(FlatConstraint(kind, flats, (name, tup)))

    csp = ColourCSP(
        flat_count=pg.flat_count,
        variables=tuple(rel.flat_indices),
        l=l,
        strong=strong,
        constraints=tuple(constraints),
        markers=tuple(reasons),
    )
    logger.debug(
        "csp_built",
        pregeometry=pg.spec.label(),
        variables=len(csp.variables),
        constraints=len(constraints),
        unsat=csp.is_trivially_unsat,
    )
    return csp
