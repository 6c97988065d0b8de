"""
The c0 / B construction of the weak case.

Over an ambient pregeometry, pick the colouring c0 whose maximal
monochromatic rank->=2 flats W_1..W_t span the smallest rank e, breaking ties
by the largest t. B relates, through the minimal-arity symbol, every
candidate tuple that lies inside no W_i; c0 is then an l-colouring of B
(a tuple outside every W_i has a multichromatic closure, since a
monochromatic closure would sit inside some maximal monochromatic flat).

Ties that remain after (e, t) are broken by sweep order: the first
canonical colouring reaching the optimum wins, and the result records it.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import structlog

from src.colouring.monochromatic import maximal_mono_flats, sweep_colourings
from src.errors import DomainError, InvariantViolation
from src.models.colouring import MonoReport
from src.models.structure import Vocabulary
from src.pregeometry import Pregeometry
from src.structures.catalog import TupleCatalog
from src.structures.structure import ColouredStructure, RelStructure
from src.validation import validate

logger = structlog.get_logger(__name__)


@dataclass
class WeakWitness:
    """c0, its monochromatic report, the structure B and two points of W_1."""

    c0: tuple[int, ...]
    report: MonoReport
    structure: RelStructure
    b1: int
    b2: int
    colourings_checked: int

    def coloured(self, l: int) -> ColouredStructure:
        return ColouredStructure.from_flat_colours(self.structure, l, self.c0)


def _tuples_outside(pg: Pregeometry, vocab: Vocabulary, report: MonoReport) -> list[tuple[int, ...]]:
    arity = vocab.minimal_symbol.arity
    catalog = TupleCatalog(pg, vocab)
    walls = [np.array(f.points, dtype=np.int64) for f in report.flats]
    out: list[tuple[int, ...]] = []
    for group in catalog.groups(arity):
        keep = np.ones(len(group), dtype=bool)
        for wall in walls:
            keep &= ~np.isin(group.tuples, wall).all(axis=1)
        out.extend(tuple(int(x) for x in row) for row in group.tuples[keep])
    return out


def find_c0_and_build_B(
    pg: Pregeometry,
    l: int,
    vocab: Optional[Vocabulary] = None,
    cap: Optional[int] = None,
) -> WeakWitness:
    """
    Sweep the colourings of pg, choose c0 and build B.

    Raises:
        DomainError: no colouring has a monochromatic rank-2 flat at this rank
        ResourceCapExceeded: the sweep passes max_colourings
        InvariantViolation: c0 fails to colour B
    """
    vocab = vocab or Vocabulary.binary()
    best: Optional[MonoReport] = None
    best_colouring: Optional[tuple[int, ...]] = None
    checked = 0
    for colouring in sweep_colourings(pg, l, cap):
        checked += 1
        report = maximal_mono_flats(pg, colouring)
        if not report.flats:
            continue
        if best is None or (report.e, -report.t_c) < (best.e, -best.t_c):
            best, best_colouring = report, colouring
    if best is None or best_colouring is None:
        raise DomainError(
            f"No colouring of {pg.spec.label()} has a monochromatic rank-2 flat; raise the rank"
        )

    symbol = vocab.minimal_symbol.name
    b = RelStructure(pg, vocab, {symbol: _tuples_outside(pg, vocab, best)})
    w1 = best.flats[0]
    witness = WeakWitness(
        c0=best_colouring,
        report=best,
        structure=b,
        b1=w1.basis[0],
        b2=w1.basis[1],
        colourings_checked=checked,
    )
    violations = validate(witness.coloured(l))
    if violations:
        raise InvariantViolation(
            "c0 is not an l-colouring of B",
            {"violations": [v.model_dump() for v in violations[:5]]},
        )
    logger.info(
        "weak_witness_built",
        pregeometry=pg.spec.label(),
        l=l,
        e=best.e,
        t_c=best.t_c,
        tuples=b.tuple_count,
        colourings_checked=checked,
    )
    return witness
