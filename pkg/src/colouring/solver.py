"""
Backtracking Colouring Solver

DESIGN DECISION: Chronological backtracking with forward checking.
Variables are taken in a static order (descending constraint degree, ties
by flat index) and values in ascending order, so every search is
deterministic. Forward checking prunes:

- AllDifferent: the assigned colour from every other open flat
- NotAllEqual:  with one flat left open and the others agreeing on x,
                x from that flat

Canonical mode walks one colouring per colour-permutation orbit: a flat may
only take a colour at most one above the largest colour used earlier in the
variable order. The constraints are invariant under permuting colours, so
this picks exactly the orbit members whose colours appear in order of first
use.

The search is iterative; instances with a thousand flats stay clear of the
recursion limit.
"""

from typing import Iterator, Optional

import structlog

from src.colouring.csp import ColourCSP, ConstraintKind, FlatConstraint, build_csp
from src.config import get_settings
from src.errors import DomainError, PreconditionError, ResourceCapExceeded
from src.models.colouring import ColouringCount
from src.models.structure import ColourRule
from src.structures.structure import AnyStructure, relational_part

logger = structlog.get_logger(__name__)

Colouring = tuple[int, ...]


class ColouringSolver:
    """
    Enumerates the solutions of one ColourCSP.

    Args:
        csp: The problem
        canonical: One solution per colour-permutation orbit
        max_nodes: Node cap (settings default)
    """

    def __init__(self, csp: ColourCSP, canonical: bool = False, max_nodes: Optional[int] = None):
        self.csp = csp
        self.canonical = canonical
        self.max_nodes = max_nodes if max_nodes is not None else get_settings().limits.max_solver_nodes
        self.nodes = 0

        touching: dict[int, list[FlatConstraint]] = {v: [] for v in csp.variables}
        for c in csp.constraints:
            for f in c.flats:
                touching[f].append(c)
        self._touching = touching
        self.order = sorted(csp.variables, key=lambda v: (-len(touching[v]), v))

    def _assign(
        self,
        var: int,
        colour: int,
        assigned: list[int],
        domains: list[set[int]],
    ) -> tuple[bool, list[tuple[int, int]]]:
        """Assign and forward-check; returns (consistent, pruned values)."""
        assigned[var] = colour
        pruned: list[tuple[int, int]] = []
        for c in self._touching[var]:
            if c.kind == ConstraintKind.ALL_DIFFERENT:
                for u in c.flats:
                    if u != var and not assigned[u] and colour in domains[u]:
                        domains[u].discard(colour)
                        pruned.append((u, colour))
                        if not domains[u]:
                            return False, pruned
                continue
            open_flats = [u for u in c.flats if not assigned[u]]
            used = {assigned[u] for u in c.flats if assigned[u]}
            if not open_flats:
                if len(used) == 1:
                    return False, pruned
            elif len(open_flats) == 1 and len(used) == 1:
                u = open_flats[0]
                x = next(iter(used))
                if x in domains[u]:
                    domains[u].discard(x)
                    pruned.append((u, x))
                    if not domains[u]:
                        return False, pruned
        return True, pruned

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise ResourceCapExceeded("max_solver_nodes", self.max_nodes, observed=self.nodes)

    def solutions(self) -> Iterator[Colouring]:
        """
        Every solution as a colour vector in pg flat order (0 outside the
        variables), in search order.

        Raises:
            ResourceCapExceeded: more than max_nodes assignments tried
        """
        csp = self.csp
        if csp.is_trivially_unsat:
            return
        order = self.order
        n = len(order)
        if n == 0:
            yield (0,) * csp.flat_count
            return

        assigned = [0] * csp.flat_count
        domains: list[set[int]] = [set() for _ in range(csp.flat_count)]
        for v in order:
            domains[v] = set(range(1, csp.l + 1))

        candidates: list[list[int]] = [[] for _ in range(n)]
        cursor = [0] * n
        ceiling = [0] * (n + 1)
        pruned: list[list[tuple[int, int]]] = [[] for _ in range(n)]

        def enter(depth: int) -> None:
            values = sorted(domains[order[depth]])
            if self.canonical:
                values = [c for c in values if c <= ceiling[depth] + 1]
            candidates[depth] = values
            cursor[depth] = 0

        def undo(depth: int) -> None:
            for u, c in pruned[depth]:
                domains[u].add(c)
            pruned[depth] = []
            assigned[order[depth]] = 0

        depth = 0
        enter(0)
        while depth >= 0:
            var = order[depth]
            if assigned[var]:
                undo(depth)
            if cursor[depth] >= len(candidates[depth]):
                depth -= 1
                continue
            colour = candidates[depth][cursor[depth]]
            cursor[depth] += 1
            self._tick()
            ok, pruned[depth] = self._assign(var, colour, assigned, domains)
            if not ok:
                undo(depth)
                continue
            ceiling[depth + 1] = max(ceiling[depth], colour)
            if depth == n - 1:
                yield tuple(assigned)
                continue
            depth += 1
            enter(depth)


def _csp(s: AnyStructure, l: int, strong: bool, colour_rule: ColourRule) -> ColourCSP:
    if l < 1:
        raise DomainError(f"Colour count must be positive, got {l}")
    return build_csp(s, l, strong, colour_rule)


def solve_csp(csp: ColourCSP, max_nodes: Optional[int] = None) -> Optional[Colouring]:
    """First solution, None when the search is exhausted."""
    solver = ColouringSolver(csp, max_nodes=max_nodes)
    found = next(solver.solutions(), None)
    logger.debug("solver_finished", nodes=solver.nodes, satisfiable=found is not None)
    return found


def find_colouring(
    s: AnyStructure,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
    max_nodes: Optional[int] = None,
) -> Optional[Colouring]:
    """
    A (strong) l-colouring of s as a flat colour vector, or None when s
    has none.
    """
    return solve_csp(_csp(s, l, strong, colour_rule), max_nodes)


def iter_colourings(
    s: AnyStructure,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
    canonical: bool = False,
    max_nodes: Optional[int] = None,
) -> Iterator[Colouring]:
    """All colourings of s, or one per colour-permutation orbit."""
    solver = ColouringSolver(_csp(s, l, strong, colour_rule), canonical=canonical, max_nodes=max_nodes)
    yield from solver.solutions()


def count_colourings_up_to_perm(
    s: AnyStructure,
    l: int,
    strong: bool = False,
    cap: Optional[int] = None,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> ColouringCount:
    """Number of colour-permutation orbits of colourings, exact up to cap."""
    limit = cap if cap is not None else get_settings().limits.max_colourings
    count = 0
    for _ in iter_colourings(s, l, strong, colour_rule, canonical=True):
        count += 1
        if count > limit:
            return ColouringCount(count=limit, exact=False)
    return ColouringCount(count=count)


def _flat_of(s: AnyStructure, p: int) -> int:
    rel = relational_part(s)
    if p not in rel.point_set:
        raise PreconditionError(f"Point {p} is outside the universe")
    idx = rel.pg.flat_index_of_point(p)
    if idx is None:
        raise PreconditionError(f"Point {p} lies in closure(∅)")
    return idx


def same_colour_all(
    s: AnyStructure,
    a: int,
    b: int,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> bool:
    """
    Whether every (strong) l-colouring of s gives a and b one colour.

    Raises:
        PreconditionError: a or b in closure(∅) or outside the universe
        DomainError: s has no colouring at all
    """
    fa, fb = _flat_of(s, a), _flat_of(s, b)
    csp = _csp(s, l, strong, colour_rule)
    if solve_csp(csp) is None:
        raise DomainError("Structure has no colouring; same-colour questions are vacuous")
    if fa == fb:
        return True
    split = FlatConstraint(ConstraintKind.ALL_DIFFERENT, (min(fa, fb), max(fa, fb)))
    return solve_csp(csp.with_constraint(split)) is None


def same_colour_classes(
    s: AnyStructure,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> list[list[int]]:
    """
    Flat indices grouped by "same colour in every colouring".

    Classes are found by intersecting the partitions of all canonical
    colourings, which is the same relation as same_colour_all.

    Raises:
        DomainError: s has no colouring
    """
    rel = relational_part(s)
    classes: Optional[dict[int, tuple[int, ...]]] = None
    for colouring in iter_colourings(s, l, strong, colour_rule, canonical=True):
        if classes is None:
            classes = {f: () for f in rel.flat_indices}
        for f in rel.flat_indices:
            classes[f] = classes[f] + (colouring[f],)
    if classes is None:
        raise DomainError("Structure has no colouring")
    groups: dict[tuple[int, ...], list[int]] = {}
    for f in rel.flat_indices:
        groups.setdefault(classes[f], []).append(f)
    return sorted(groups.values())


def chromatic_min(
    s: AnyStructure,
    strong: bool = False,
    l_max: int = 8,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> Optional[int]:
    """Least l' <= l_max with a (strong) l'-colouring, None when there is none."""
    base = build_csp(s, l_max, strong, colour_rule)
    for l in range(1, l_max + 1):
        if solve_csp(base.with_l(l)) is not None:
            return l
    return None


def needs_all_colours(
    s: AnyStructure,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> bool:
    """s is l-colourable but not l'-colourable for any l' < l."""
    return chromatic_min(s, strong, l, colour_rule) == l
