"""
Randomised search for structures that need all l colours.

Kept out of the package exports: it draws structures through
src.sampling, which in turn uses the solver of this package.
"""

from typing import Iterable, Optional

import structlog

from src.colouring.solver import chromatic_min
from src.config import get_settings
from src.models.pregeometry import PregeometrySpec
from src.models.structure import ColourRule, Vocabulary
from src.pregeometry import build_pregeometry
from src.sampling.rng import sample_rng
from src.sampling.sampler import sample_coloured
from src.structures.structure import RelStructure

logger = structlog.get_logger(__name__)


def find_U(
    family: PregeometrySpec,
    l: int,
    vocab: Optional[Vocabulary] = None,
    strong: bool = False,
    budget: int = 200,
    seed: Optional[int] = None,
    ranks: Iterable[int] = (2, 3, 4),
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> Optional[RelStructure]:
    """
    A colourable structure whose chromatic minimum is exactly l, found by
    sampling (strongly) l-coloured structures and forgetting the colours.

    `budget` bounds the number of samples over all ranks; None means the
    budget ran out (a larger rank may help).
    """
    vocab = vocab or Vocabulary.binary()
    seed = seed if seed is not None else get_settings().sampling.default_seed
    levels = tuple(ranks)
    per_rank = max(1, budget // max(1, len(levels)))
    attempts = 0
    for n in levels:
        pg = build_pregeometry(family.with_rank(n))
        for index in range(per_rank):
            if attempts >= budget:
                break
            attempts += 1
            m = sample_coloured(pg, vocab, l, strong, colour_rule, sample_rng(seed, n, index))
            if chromatic_min(m.base, strong, l, colour_rule) == l:
                logger.info("u_found", pregeometry=pg.spec.label(), l=l, strong=strong, attempts=attempts)
                return m.base
    logger.info("u_not_found", family=family.kind.value, l=l, strong=strong, attempts=attempts)
    return None


def shrink_to_witness(
    u: RelStructure,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> RelStructure:
    """
    Drop related tuples one at a time while the chromatic minimum stays l,
    then restrict to the closure of what is left.
    """
    relations = {s.name: set(u.stored(s.name)) for s in u.vocab.symbols}
    for name, tup in list(u.all_tuples()):
        relations[name].discard(tup)
        trial = u.with_relations(relations)
        if chromatic_min(trial, strong, l, colour_rule) != l:
            relations[name].add(tup)
    kept = u.with_relations(relations)
    support = {p for _, tup in kept.all_tuples() for p in tup}
    flat = u.pg.closure(support)
    shrunk = kept.restrict(flat)
    logger.debug(
        "witness_shrunk",
        tuples_before=u.tuple_count,
        tuples_after=shrunk.tuple_count,
        rank=shrunk.rank,
    )
    return shrunk
