"""
The two-stage sampler of the dimension conditional measure.

Stage 1 colours every rank-1 flat uniformly from 1..l. Stage 2 flips one
fair coin per candidate tuple of the catalog (per orbit representative in
symmetric mode) and keeps the admissible tuples whose coin came up. Coins
are drawn for inadmissible candidates too, so the stream position after a
sample depends only on the catalog size.

This gives every structure M probability l^(-#flats) · 2^(-#admissible for
M's colouring); src.sampling.exact checks that against the inductive
definition.
"""

from typing import Iterator, Optional

import numpy as np

from src.models.experiment import SamplerConfig
from src.models.structure import ColourRule, Vocabulary
from src.pregeometry import Pregeometry, build_pregeometry
from src.sampling.rng import sample_rng
from src.structures.catalog import catalog_for
from src.structures.structure import ColouredStructure, RelStructure


def sample_coloured(
    pg: Pregeometry,
    vocab: Vocabulary,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
    rng: Optional[np.random.Generator] = None,
) -> ColouredStructure:
    rng = rng if rng is not None else np.random.default_rng()
    catalog = catalog_for(pg, vocab)
    flat_colours = rng.integers(1, l + 1, size=pg.flat_count)
    relations: dict[str, list[tuple[int, ...]]] = {}
    for symbol in vocab.symbols:
        chosen: list[tuple[int, ...]] = []
        for group in catalog.groups(symbol.arity):
            coins = rng.random(len(group)) < 0.5
            keep = coins & group.admissible_mask(flat_colours, strong, colour_rule)
            chosen.extend(tuple(row) for row in group.tuples[keep].tolist())
        relations[symbol.name] = chosen
    base = RelStructure(pg, vocab, relations)
    return ColouredStructure.from_flat_colours(base, l, flat_colours)


def sample_colourable(
    pg: Pregeometry,
    vocab: Vocabulary,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
    rng: Optional[np.random.Generator] = None,
) -> RelStructure:
    """A draw from the induced measure on colourable structures."""
    return sample_coloured(pg, vocab, l, strong, colour_rule, rng).base


class Sampler:
    """
    Samples for one SamplerConfig.

    Sample `index` at rank `n` is the same structure whichever way it is
    requested.
    """

    def __init__(self, config: SamplerConfig):
        self.config = config
        self.vocab = config.vocab()

    def pregeometry(self, n: int) -> Pregeometry:
        return build_pregeometry(self.config.pregeometry(n))

    def coloured(self, n: int, index: int) -> ColouredStructure:
        cfg = self.config
        return sample_coloured(
            self.pregeometry(n),
            self.vocab,
            cfg.l,
            cfg.strong,
            cfg.colour_rule,
            sample_rng(cfg.seed, n, index),
        )

    def colourable(self, n: int, index: int) -> RelStructure:
        return self.coloured(n, index).base

    def stream(self, n: int, count: Optional[int] = None, start: int = 0) -> Iterator[ColouredStructure]:
        stop = start + (count if count is not None else self.config.samples)
        for index in range(start, stop):
            yield self.coloured(n, index)
