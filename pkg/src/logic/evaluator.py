"""
Model checking by quantifier expansion.

DESIGN DECISION: Budgets come back as values.
`evaluate` returns True, False or a BudgetExceeded record; callers that
estimate probabilities count budget hits separately instead of losing a
whole run to one expensive sample.

DESIGN DECISION: A quantifier block is expanded one variable at a time.
The guard of a block is its body under ∃ and the antecedent of an
implication under ∀. Each top-level conjunct of the guard is checked as soon
as its last block variable has a value, which prunes the expansion the way
a backtracking search would. In addition, when a conjunct θ(ā, v) (or
v = w) has every other variable bound, v only ranges over cl(ā) (or {w}).
"""

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence, Union

import structlog

from src.config import get_settings
from src.errors import DomainError, PreconditionError
from src.logic.formula import (
    And,
    Bottom,
    Colour,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Rel,
    Theta,
    Top,
    Var,
)
from src.structures.structure import AnyStructure, ColouredStructure

logger = structlog.get_logger(__name__)

Assignment = Mapping[Var, int]


@dataclass(frozen=True)
class EvalBudget:
    """Limits of one evaluation."""

    max_assignments: int
    max_quantifier_expansion: int

    @classmethod
    def from_settings(cls) -> 'EvalBudget':
        limits = get_settings().limits
        return cls(limits.max_assignments, limits.max_quantifier_expansion)


@dataclass(frozen=True)
class BudgetExceeded:
    """An evaluation stopped by its budget. Has no truth value."""

    limit_name: str
    limit: int
    assignments: int

    def __bool__(self) -> bool:
        raise TypeError("BudgetExceeded has no truth value; check isinstance first")


EvalResult = Union[bool, BudgetExceeded]


class _OutOfBudget(Exception):
    def __init__(self, limit_name: str, limit: int):
        self.limit_name = limit_name
        self.limit = limit


def _conjuncts(f: Optional[Formula]) -> tuple[Formula, ...]:
    if f is None:
        return ()
    return f.parts if isinstance(f, And) else (f,)


@dataclass(frozen=True)
class _Block:
    """A quantifier block prepared for expansion."""

    variables: tuple[Var, ...]
    body: Formula
    guard: tuple[Formula, ...]
    checks: tuple[tuple[Formula, ...], ...]

    @classmethod
    def of(cls, variables: tuple[Var, ...], body: Formula, guard: Optional[Formula]) -> '_Block':
        position = {v: i for i, v in enumerate(variables)}
        slots: list[list[Formula]] = [[] for _ in variables]
        conjuncts = _conjuncts(guard)
        for c in conjuncts:
            mine = [position[v] for v in c.free if v in position]
            if variables:
                slots[max(mine) if mine else 0].append(c)
        return cls(variables, body, conjuncts, tuple(tuple(s) for s in slots))


class _Evaluation:
    """One evaluation run over a fixed structure and budget."""

    def __init__(self, m: AnyStructure, budget: EvalBudget):
        self.m = m
        self.pg = m.pg
        self.universe = m.points
        self.point_set = m.point_set
        self.budget = budget
        self.assignments = 0
        self._theta_cache: dict[tuple[frozenset[int], int], bool] = {}
        self._blocks: dict[int, _Block] = {}

    def tick(self) -> None:
        self.assignments += 1
        if self.assignments > self.budget.max_assignments:
            raise _OutOfBudget("max_assignments", self.budget.max_assignments)

    def theta(self, args: Sequence[int], y: int) -> bool:
        key = (frozenset(args), y)
        hit = self._theta_cache.get(key)
        if hit is None:
            hit = y in key[0] or self.pg.theta(key[0], y)
            self._theta_cache[key] = hit
        return hit

    def block(self, f: Union[Exists, Forall]) -> _Block:
        cached = self._blocks.get(id(f))
        if cached is None:
            if isinstance(f, Exists):
                guard: Optional[Formula] = f.body
            else:
                guard = f.body.left if isinstance(f.body, Implies) else None
            cached = _Block.of(f.variables, f.body, guard)
            self._blocks[id(f)] = cached
        return cached

    # -------------------------------------------------------------------------

    def eval(self, f: Formula, env: dict[Var, int]) -> bool:
        if isinstance(f, Top):
            return True
        if isinstance(f, Bottom):
            return False
        if isinstance(f, Eq):
            return env[f.left] == env[f.right]
        if isinstance(f, Theta):
            return self.theta([env[a] for a in f.args], env[f.y])
        if isinstance(f, Rel):
            return self.m.holds(f.name, [env[a] for a in f.args])
        if isinstance(f, Colour):
            if not isinstance(self.m, ColouredStructure) or not self.m.has_colours:
                raise DomainError("Colour atoms can only be evaluated on coloured structures")
            return self.m.colour_of_point(env[f.var]) == f.colour
        if isinstance(f, Not):
            return not self.eval(f.body, env)
        if isinstance(f, And):
            return all(self.eval(p, env) for p in f.parts)
        if isinstance(f, Or):
            return any(self.eval(p, env) for p in f.parts)
        if isinstance(f, Implies):
            return (not self.eval(f.left, env)) or self.eval(f.right, env)
        if isinstance(f, Iff):
            return self.eval(f.left, env) == self.eval(f.right, env)
        if isinstance(f, (Exists, Forall)):
            if len(f.variables) > self.budget.max_quantifier_expansion:
                raise _OutOfBudget("max_quantifier_expansion", self.budget.max_quantifier_expansion)
            existential = isinstance(f, Exists)
            return self.expand(self.block(f), 0, env, existential)
        raise TypeError(f"Unknown formula node {type(f).__name__}")

    def expand(self, block: _Block, i: int, env: dict[Var, int], existential: bool) -> bool:
        """
        Under ∃: does some extension satisfy the body. Under ∀: does every
        extension. A failed guard conjunct rejects the value under ∃ and
        makes the implication vacuous under ∀; either way the value is
        skipped.
        """
        if i == len(block.variables):
            return self.eval(block.body, env)
        v = block.variables[i]
        had, saved = v in env, env.get(v)
        try:
            for value in self.range_of(v, block.variables[i + 1:], block.guard, env):
                self.tick()
                env[v] = value
                if not all(self.eval(c, env) for c in block.checks[i]):
                    continue
                if self.expand(block, i + 1, env, existential) == existential:
                    return existential
            return not existential
        finally:
            if had:
                env[v] = saved  # type: ignore[assignment]
            else:
                env.pop(v, None)

    def range_of(
        self,
        v: Var,
        later: tuple[Var, ...],
        guard: tuple[Formula, ...],
        env: dict[Var, int],
    ) -> Sequence[int]:
        pending = set(later) | {v}

        def known(names: Sequence[Var]) -> bool:
            return all(a in env and a not in pending for a in names)

        for c in guard:
            if isinstance(c, Eq) and v in (c.left, c.right):
                other = c.right if c.left == v else c.left
                if other != v and known([other]):
                    w = env[other]
                    return [w] if w in self.point_set else []
            if isinstance(c, Theta) and c.y == v and v not in c.args and known(c.args):
                flat = self.pg.closure([env[a] for a in c.args])
                return sorted(p for p in flat.points if p in self.point_set)
        return self.universe

    def solutions(self, block: _Block, i: int, env: dict[Var, int]) -> Iterator[dict[Var, int]]:
        if i == len(block.variables):
            if self.eval(block.body, env):
                yield dict(env)
            return
        v = block.variables[i]
        for value in self.range_of(v, block.variables[i + 1:], block.guard, env):
            self.tick()
            env[v] = value
            if all(self.eval(c, env) for c in block.checks[i]):
                yield from self.solutions(block, i + 1, env)
        env.pop(v, None)


def _check_assignment(m: AnyStructure, f: Formula, assignment: Assignment) -> dict[Var, int]:
    missing = f.free - set(assignment)
    if missing:
        raise PreconditionError(f"Free variables without values: {sorted(missing)}")
    env = {k: int(v) for k, v in assignment.items()}
    outside = {k: v for k, v in env.items() if v not in m.point_set}
    if outside:
        raise PreconditionError(f"Assignment leaves the universe: {outside}")
    return env


def evaluate(
    m: AnyStructure,
    f: Formula,
    assignment: Optional[Assignment] = None,
    budget: Optional[EvalBudget] = None,
) -> EvalResult:
    """
    Truth of f in m under the assignment.

    Raises:
        PreconditionError: a free variable has no value
        DomainError: colour atoms on an uncoloured structure
    """
    env = _check_assignment(m, f, assignment or {})
    run = _Evaluation(m, budget or EvalBudget.from_settings())
    try:
        return run.eval(f, env)
    except _OutOfBudget as e:
        logger.info("evaluation_budget_exceeded", limit=e.limit_name, assignments=run.assignments)
        return BudgetExceeded(e.limit_name, e.limit, run.assignments)


def solutions(
    m: AnyStructure,
    f: Formula,
    variables: Sequence[Var],
    budget: Optional[EvalBudget] = None,
) -> Union[list[dict[Var, int]], BudgetExceeded]:
    """
    Every assignment of `variables` satisfying f.

    Raises:
        PreconditionError: a free variable of f is not among `variables`
    """
    names = tuple(variables)
    missing = f.free - set(names)
    if missing:
        raise PreconditionError(f"Free variables without values: {sorted(missing)}")
    run = _Evaluation(m, budget or EvalBudget.from_settings())
    try:
        return list(run.solutions(_Block.of(names, f, f), 0, {}))
    except _OutOfBudget as e:
        return BudgetExceeded(e.limit_name, e.limit, run.assignments)
