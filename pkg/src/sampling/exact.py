"""
Exact dimension conditional measure for tiny instances.

DESIGN DECISION: The inductive definition is implemented literally.
P_0 is uniform on the 0-reducts; P_r(M↾r) divides P_(r-1)(M↾r-1) evenly
among the r-reducts extending M↾r-1. `product_measure` is the closed form
l^(-#flats) · 2^(-#admissible); the two are computed independently so they
can be compared structure by structure.
"""

from collections import defaultdict
from fractions import Fraction
from typing import Optional

import numpy as np
import structlog

from src.models.structure import ColourRule, Vocabulary
from src.pregeometry import Pregeometry
from src.structures.catalog import TupleCatalog, admissible_count
from src.structures.enumerate import enumerate_coloured
from src.structures.operations import reduct_dim
from src.structures.structure import ColouredStructure

logger = structlog.get_logger(__name__)

Measure = dict[ColouredStructure, Fraction]


def exact_measure(
    pg: Pregeometry,
    vocab: Vocabulary,
    l: int,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
    cap: Optional[int] = None,
) -> Measure:
    """
    δ_n on every member of K_n (or SK_n when strong).

    Raises:
        ResourceCapExceeded: |K_n| exceeds max_enumeration
    """
    structures = enumerate_coloured(pg, vocab, l, strong, colour_rule, cap)
    rho = vocab.rho
    chains = [[reduct_dim(m, r) for r in range(rho + 1)] for m in structures]

    roots = {chain[0] for chain in chains}
    prob: dict[ColouredStructure, Fraction] = {root: Fraction(1, len(roots)) for root in roots}
    for r in range(1, rho + 1):
        children: dict[ColouredStructure, set[ColouredStructure]] = defaultdict(set)
        for chain in chains:
            children[chain[r - 1]].add(chain[r])
        prob = {
            child: prob[parent] / len(kids)
            for parent, kids in children.items()
            for child in kids
        }
        logger.debug("exact_level_done", level=r, reducts=len(prob))
    return {chain[rho]: prob[chain[rho]] for chain in chains}


def product_measure(
    m: ColouredStructure,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
    catalog: Optional[TupleCatalog] = None,
) -> Fraction:
    """l^(-#flats) · 2^(-#admissible tuples of m's colouring)."""
    pg = m.pg
    catalog = catalog or TupleCatalog(pg, m.vocab)
    colouring = np.asarray(m.colouring, dtype=np.int64)
    admissible = admissible_count(catalog, m.vocab, colouring, strong, colour_rule)
    return Fraction(1, m.l ** pg.flat_count * 2 ** admissible)


def colouring_atoms(measure: Measure) -> dict[tuple[int, ...], Fraction]:
    """Mass of each colouring (the 1-reduct marginal)."""
    out: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)
    for m, p in measure.items():
        out[m.colouring] += p
    return dict(out)
