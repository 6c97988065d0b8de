"""
Two-Stage Colouring Validation

DESIGN DECISION: Validation happens in two distinct stages:

STAGE 1 - STRUCTURAL CONDITIONS:
- (1) exactly the points outside closure(∅) carry a colour, each one colour
- (3) dependent points outside closure(∅) share their colour

STAGE 2 - RELATIONAL CONDITIONS:
- (2) no related tuple lies inside closure(∅)
- (4) the closure of every related tuple sees two colours
- (5) strong mode: independent points of that closure differ in colour

The colour rule switches (4) to "two entries of the tuple differ in colour".
A d-reduct is checked for membership in K_n restricted to d: colours are
required only when d >= 1 and related tuples must have dimension <= d.

IMPORTANT: Validation NEVER raises on a bad structure.
Every literally false condition comes back as a Violation.
"""

from typing import Mapping, Sequence, Union

import numpy as np
import structlog

from src.errors import PreconditionError
from src.models.structure import ColourRule, ValidationReport, Violation
from src.pregeometry import Flat
from src.structures.structure import ColouredStructure, RelStructure

logger = structlog.get_logger(__name__)

_MAX_REPORTED_PER_CONDITION = 50


class StructureValidator:
    """
    Checks a ColouredStructure against the colouring conditions.

    Stage 1 can run on colours alone; stage 2 walks every stored tuple.
    """

    def __init__(
        self,
        strong: bool = False,
        colour_rule: ColourRule = ColourRule.CLOSURE,
        max_reported: int = _MAX_REPORTED_PER_CONDITION,
    ):
        self.strong = strong
        self.colour_rule = colour_rule
        self.max_reported = max_reported

    def _validate_structural(self, m: ColouredStructure) -> list[Violation]:
        """
        Stage 1: conditions (1) and (3).

        Returns: list of violations
        """
        issues: list[Violation] = []
        pg = m.pg
        cl0 = pg.empty_closure().points
        colours = m.point_colours
        universe = m.point_set

        coloured_cl0 = sorted(p for p in cl0 if p in universe and colours[p] != 0)
        if coloured_cl0:
            issues.append(Violation(
                condition=1,
                points=coloured_cl0[:self.max_reported],
                note="Points of closure(∅) carry a colour",
            ))

        outside = sorted(p for p in range(pg.universe_size) if p not in universe and colours[p] != 0)
        if outside:
            issues.append(Violation(
                condition=1,
                points=outside[:self.max_reported],
                note="Points outside the universe carry a colour",
            ))

        if not m.has_colours:
            stray = sorted(p for p in universe if colours[p] != 0)
            if stray:
                issues.append(Violation(
                    condition=1,
                    points=stray[:self.max_reported],
                    note=f"The {m.reduct_level}-reduct carries colours",
                ))
            return issues

        uncoloured = sorted(p for p in universe if p not in cl0 and colours[p] == 0)
        if uncoloured:
            issues.append(Violation(
                condition=1,
                points=uncoloured[:self.max_reported],
                note="Points outside closure(∅) without a colour",
            ))

        flats = pg.one_dim_flats()
        for i in m.base.flat_indices:
            members = sorted(flats[i].points - cl0)
            seen = {int(colours[p]) for p in members if colours[p] != 0}
            if len(seen) > 1:
                first = members[0]
                other = next(p for p in members if colours[p] != colours[first])
                issues.append(Violation(
                    condition=3,
                    points=[first, other],
                    note=f"Dependent points {first} and {other} have colours "
                         f"{int(colours[first])} and {int(colours[other])}",
                ))
        return issues

    def _validate_relational(self, m: ColouredStructure) -> list[Violation]:
        """
        Stage 2: conditions (2), (4) and (5) for every stored tuple.

        Returns: list of violations
        """
        issues: list[Violation] = []
        pg = m.pg
        cl0 = pg.empty_closure().points
        colours = m.point_colours
        flats = pg.one_dim_flats()
        counts = {2: 0, 4: 0, 5: 0}

        def report(v: Violation) -> None:
            counts[v.condition] += 1
            if counts[v.condition] <= self.max_reported:
                issues.append(v)

        for name, tup in m.all_tuples():
            closure = pg.closure(tup)
            if closure.rank == 0:
                report(Violation(
                    condition=2,
                    symbol=name,
                    entries=list(tup),
                    note="Related tuple inside closure(∅)",
                ))
                continue
            if m.reduct_level is not None and closure.rank > m.reduct_level:
                report(Violation(
                    condition=4,
                    symbol=name,
                    entries=list(tup),
                    note=f"Tuple of dimension {closure.rank} exceeds reduct level {m.reduct_level}",
                ))
                continue
            if not m.has_colours:
                continue

            if self.colour_rule == ColourRule.TUPLE:
                witnesses = [p for p in tup if p not in cl0]
            else:
                witnesses = sorted(closure.points - cl0)
            if len({int(colours[p]) for p in witnesses}) < 2:
                report(Violation(
                    condition=4,
                    symbol=name,
                    entries=list(tup),
                    note="No two differently coloured points in the "
                         + ("tuple" if self.colour_rule == ColourRule.TUPLE else "closure"),
                ))

            if self.strong:
                by_colour: dict[int, int] = {}
                for i in pg.flat_indices_in(closure.points):
                    rep = flats[i].basis[0]
                    c = int(colours[rep])
                    if c in by_colour:
                        report(Violation(
                            condition=5,
                            symbol=name,
                            entries=list(tup),
                            points=[by_colour[c], rep],
                            note=f"Independent points {by_colour[c]} and {rep} share colour {c}",
                        ))
                        break
                    by_colour[c] = rep
        return issues

    def validate(self, m: ColouredStructure) -> ValidationReport:
        """Run both stages and collect every violation."""
        violations = self._validate_structural(m) + self._validate_relational(m)
        logger.debug(
            "structure_validated",
            pregeometry=m.pg.spec.label(),
            strong=self.strong,
            violations=len(violations),
        )
        return ValidationReport(
            strong=self.strong,
            colour_rule=self.colour_rule,
            violations=violations,
        )


def validate(
    m: ColouredStructure,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> list[Violation]:
    """Violations of m; empty iff m is (strongly) l-coloured."""
    return StructureValidator(strong, colour_rule).validate(m).violations


def validate_colouring_fn(
    s: RelStructure,
    gamma: Union[Mapping[Flat, int], Sequence[int], np.ndarray],
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> bool:
    """
    Whether gamma is a (strong) l-colouring of s.

    Works on flat colours directly and shares no code with the validator,
    so the two can be cross-checked.

    Raises:
        PreconditionError: gamma misses a rank-1 flat of s
    """
    pg = s.pg
    flats = pg.one_dim_flats()
    if isinstance(gamma, Mapping):
        lookup = {pg.flat_index(f): c for f, c in gamma.items()}
    else:
        lookup = {i: int(c) for i, c in enumerate(gamma)}
    flat_colour: dict[int, int] = {}
    for i in s.flat_indices:
        if i not in lookup or lookup[i] == 0:
            raise PreconditionError(f"Colouring misses the flat with basis {flats[i].basis}")
        flat_colour[i] = lookup[i]
    if any(c < 1 or c > l for c in flat_colour.values()):
        return False

    for _, tup in s.all_tuples():
        if pg.rank_of(tup) == 0:
            return False
        inside = pg.flat_indices_in(pg.closure(tup).points)
        seen = [flat_colour[i] for i in inside]
        if strong and len(set(seen)) != len(seen):
            return False
        if colour_rule == ColourRule.TUPLE:
            entry_colours = {flat_colour[i] for i in pg.flat_indices_in(tup)}
            if len(entry_colours) < 2:
                return False
        elif len(set(seen)) < 2:
            return False
    return True


def is_valid(
    m: ColouredStructure,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> bool:
    return not validate(m, strong, colour_rule)

