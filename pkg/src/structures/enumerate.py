"""
Exhaustive enumeration of K_n, the (strongly) l-coloured structures on one
pregeometry.

A structure is a colouring of the rank-1 flats plus any subset of the tuples
admissible under that colouring, so |K_n| = Σ_c 2^(#admissible(c)).
Enumeration is only meant for tiny instances and is cap-guarded.
"""

from itertools import product
from typing import Iterator, Optional

import numpy as np
import structlog

from src.config import get_settings
from src.errors import ResourceCapExceeded
from src.models.structure import ColourRule, Vocabulary
from src.pregeometry import Pregeometry
from src.structures.catalog import TupleCatalog, admissible_count, admissible_tuples
from src.structures.structure import ColouredStructure, RelStructure

logger = structlog.get_logger(__name__)


def iter_flat_colourings(flat_count: int, l: int, cap: Optional[int] = None) -> Iterator[np.ndarray]:
    """All l^flat_count flat colourings in lexicographic order."""
    limit = cap if cap is not None else get_settings().limits.max_colourings
    total = l ** flat_count
    if total > limit:
        raise ResourceCapExceeded("max_colourings", limit, observed=total)
    for row in product(range(1, l + 1), repeat=flat_count):
        yield np.array(row, dtype=np.int64)


def count_coloured(
    pg: Pregeometry,
    vocab: Vocabulary,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> int:
    """|K_n| without materialising any structure."""
    catalog = TupleCatalog(pg, vocab)
    total = 0
    for colouring in iter_flat_colourings(pg.flat_count, l):
        total += 2 ** admissible_count(catalog, vocab, colouring, strong, colour_rule)
    logger.debug(
        "coloured_structures_counted",
        pregeometry=pg.spec.label(),
        l=l,
        strong=strong,
        colour_rule=colour_rule.value,
        count=total,
    )
    return total


def enumerate_coloured(
    pg: Pregeometry,
    vocab: Vocabulary,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
    cap: Optional[int] = None,
) -> list[ColouredStructure]:
    """
    Every structure of K_n exactly once, colourings in lexicographic order
    and relation subsets in binary-counter order.

    Raises:
        ResourceCapExceeded: |K_n| exceeds max_enumeration
    """
    limit = cap if cap is not None else get_settings().limits.max_enumeration
    total = count_coloured(pg, vocab, l, strong, colour_rule)
    if total > limit:
        raise ResourceCapExceeded("max_enumeration", limit, observed=total)

    catalog = TupleCatalog(pg, vocab)
    empty = RelStructure(pg, vocab)
    out: list[ColouredStructure] = []
    for colouring in iter_flat_colourings(pg.flat_count, l):
        candidates = admissible_tuples(catalog, vocab, colouring, strong, colour_rule)
        for mask in range(2 ** len(candidates)):
            relations: dict[str, list[tuple[int, ...]]] = {s.name: [] for s in vocab.symbols}
            for bit, (name, tup) in enumerate(candidates):
                if mask >> bit & 1:
                    relations[name].append(tup)
            base = empty.with_relations(relations) if mask else empty
            out.append(ColouredStructure.from_flat_colours(base, l, colouring))
    return out
