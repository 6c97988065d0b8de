"""
Events decided per sample.

An event is named by a string so it can travel to worker processes:
either one of the built-in names or an s-expression sentence (anything
starting with '('). Colour atoms in a sentence are evaluated against the
sampled colouring.
"""

from dataclasses import dataclass
from typing import Callable, Optional

from src.colouring.solver import count_colourings_up_to_perm, needs_all_colours
from src.errors import ConfigError
from src.logic.evaluator import EvalBudget, EvalResult, evaluate
from src.logic.sexpr import parse_sexpr
from src.models.structure import ColourRule
from src.structures.structure import ColouredStructure

Decider = Callable[[ColouredStructure], EvalResult]


@dataclass(frozen=True)
class EventContext:
    """Colouring parameters some events need."""

    l: int
    strong: bool = False
    colour_rule: ColourRule = ColourRule.CLOSURE
    budget: Optional[EvalBudget] = None


def _relations_nonempty(m: ColouredStructure, ctx: EventContext) -> EvalResult:
    return m.base.has_relations()


def _true(m: ColouredStructure, ctx: EventContext) -> EvalResult:
    return True


def _unique_colouring(m: ColouredStructure, ctx: EventContext) -> EvalResult:
    count = count_colourings_up_to_perm(m.base, ctx.l, ctx.strong, cap=2, colour_rule=ctx.colour_rule)
    return count.exact and count.count == 1


def _needs_all_colours(m: ColouredStructure, ctx: EventContext) -> EvalResult:
    return needs_all_colours(m.base, ctx.l, ctx.strong, ctx.colour_rule)


NAMED_EVENTS: dict[str, Callable[[ColouredStructure, EventContext], EvalResult]] = {
    "relations_nonempty": _relations_nonempty,
    "true": _true,
    "unique_colouring": _unique_colouring,
    "needs_all_colours": _needs_all_colours,
}


def resolve_event(event: str, ctx: EventContext) -> Decider:
    """
    Raises:
        ConfigError: unknown event name, malformed sentence, or a formula
            with free variables
    """
    text = event.strip()
    if text.startswith("("):
        sentence = parse_sexpr(text)
        if sentence.free:
            raise ConfigError(f"Event sentence has free variables {sorted(sentence.free)}: {text}")
        return lambda m: evaluate(m, sentence, budget=ctx.budget)
    handler = NAMED_EVENTS.get(text)
    if handler is None:
        raise ConfigError(f"Unknown event {event!r}; known: {sorted(NAMED_EVENTS)} or an s-expression")
    return lambda m: handler(m, ctx)
