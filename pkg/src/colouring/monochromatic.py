"""
Monochromatic flats and the Ramsey dimension probe.

A flat is monochromatic under a colouring c of the rank-1 flats when all
rank-1 flats inside it share one colour. Every rank-(k+1) monochromatic flat
contains rank-k monochromatic flats, so the search climbs rank by rank and
stops at the first empty level.

DESIGN DECISION: Colouring sweeps are quotiented by colour relabelling.
Monochromatic flats do not depend on colour names, so the sweeps visit only
colourings whose colours appear in order of first use along the flat order
(the first flat always gets colour 1).
"""

from typing import Iterator, Optional, Sequence

import numpy as np
import structlog

from src.config import get_settings
from src.errors import DomainError, ResourceCapExceeded
from src.models.colouring import FlatRecord, MonoReport, RamseyLevel, RamseyResult
from src.models.pregeometry import PregeometryKind, PregeometrySpec
from src.pregeometry import Flat, Pregeometry, build_pregeometry

logger = structlog.get_logger(__name__)


def _flat_table(pg: Pregeometry, flats: list[Flat]) -> np.ndarray:
    """[len(flats), D] array of the rank-1 flat indices inside each flat."""
    rows = [pg.flat_indices_in(f.points) for f in flats]
    width = len(rows[0]) if rows else 0
    return np.array(rows, dtype=np.int64).reshape(len(rows), width)


def _mono_mask(table: np.ndarray, colours: np.ndarray) -> np.ndarray:
    c = colours[table]
    return np.all(c == c[:, :1], axis=1)


def monochromatic_flats(
    pg: Pregeometry,
    colouring: Sequence[int],
    rank: int,
    universe: Optional[Flat] = None,
) -> list[Flat]:
    """All monochromatic flats of one rank, in canonical-basis order."""
    colours = np.asarray(colouring, dtype=np.int64)
    flats = pg.flats_of_rank(rank)
    if universe is not None:
        flats = [f for f in flats if f.points <= universe.points]
    if not flats:
        return []
    mask = _mono_mask(_flat_table(pg, flats), colours)
    return [f for f, m in zip(flats, mask) if m]


def maximal_mono_flats(
    pg: Pregeometry,
    colouring: Sequence[int],
    min_rank: int = 2,
    universe: Optional[Flat] = None,
) -> MonoReport:
    """
    The maximal monochromatic flats of rank >= min_rank.

    Flats are reported by increasing rank, each rank in canonical-basis
    order.

    Raises:
        DomainError: colouring does not cover every rank-1 flat
    """
    colours = np.asarray(colouring, dtype=np.int64)
    if colours.shape != (pg.flat_count,):
        raise DomainError(f"Expected {pg.flat_count} flat colours, got shape {colours.shape}")
    inside = range(pg.flat_count) if universe is None else pg.flat_indices_in(universe.points)
    if any(colours[i] <= 0 for i in inside):
        raise DomainError("Colouring must be total on the rank-1 flats")
    top = pg.rank if universe is None else universe.rank
    if min_rank < 1:
        raise DomainError(f"min_rank must be at least 1, got {min_rank}")

    levels: list[list[Flat]] = []
    for k in range(min_rank, top + 1):
        mono = monochromatic_flats(pg, colours, k, universe)
        if not mono:
            break
        levels.append(mono)

    maximal: list[Flat] = []
    for i, level in enumerate(levels):
        above = levels[i + 1] if i + 1 < len(levels) else []
        maximal.extend(f for f in level if not any(f.points <= g.points for g in above))

    union: set[int] = set()
    for f in maximal:
        union |= f.points
    e = pg.rank_of(union) if union else 0
    logger.debug("mono_flats_found", pregeometry=pg.spec.label(), maximal=len(maximal), e=e)
    return MonoReport(
        colouring=[int(c) for c in colours],
        flats=[FlatRecord(basis=list(f.basis), rank=f.rank, points=sorted(f.points)) for f in maximal],
        min_rank=min_rank,
        e=e,
    )


def canonical_colourings(length: int, l: int) -> Iterator[tuple[int, ...]]:
    """
    Colourings of `length` flats with colours in order of first use,
    lexicographically.
    """
    if length == 0:
        yield ()
        return
    row = [1] * length
    # ceiling[i] = max(row[:i]), 0 for i = 0
    ceiling = [0] + [1] * (length - 1)
    while True:
        yield tuple(row)
        i = length - 1
        while i >= 0 and row[i] >= min(l, ceiling[i] + 1):
            i -= 1
        if i < 0:
            return
        row[i] += 1
        for j in range(i + 1, length):
            row[j] = 1
            ceiling[j] = max(ceiling[j - 1], row[j - 1])


def min_ramsey_dim(
    q: int,
    l: int,
    target_rank: int = 2,
    n_max: int = 4,
    cap: Optional[int] = None,
) -> RamseyResult:
    """
    Least n <= n_max such that every l-colouring of the rank-n linear space
    over GF(q) has a monochromatic flat of rank target_rank.

    A level whose sweep would pass `cap` colourings stops the search; the
    result then has no min_dim and the level is marked incomplete.
    """
    if l < 1 or target_rank < 1:
        raise DomainError("Need l >= 1 and target_rank >= 1")
    limit = cap if cap is not None else get_settings().limits.max_colourings
    result = RamseyResult(q=q, l=l, target_rank=target_rank, n_max=n_max)
    for n in range(target_rank, n_max + 1):
        pg = build_pregeometry(PregeometrySpec(kind=PregeometryKind.LINEAR, q=q, rank=n))
        table = _flat_table(pg, pg.flats_of_rank(target_rank))
        checked = 0
        avoiding: Optional[list[int]] = None
        complete = True
        for colouring in canonical_colourings(pg.flat_count, l):
            checked += 1
            if checked > limit:
                complete = False
                checked = limit
                break
            if not _mono_mask(table, np.array(colouring, dtype=np.int64)).any():
                avoiding = list(colouring)
                break
        result.levels.append(
            RamseyLevel(n=n, colourings_checked=checked, avoiding_colouring=avoiding, complete=complete)
        )
        logger.info(
            "ramsey_level_done",
            q=q,
            l=l,
            n=n,
            checked=checked,
            avoided=avoiding is not None,
            complete=complete,
        )
        if not complete:
            return result
        if avoiding is None:
            result.min_dim = n
            return result
    return result


def sweep_colourings(pg: Pregeometry, l: int, cap: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """
    Canonical colourings of pg's rank-1 flats.

    Raises:
        ResourceCapExceeded: the sweep passes max_colourings
    """
    limit = cap if cap is not None else get_settings().limits.max_colourings
    for i, colouring in enumerate(canonical_colourings(pg.flat_count, l)):
        if i >= limit:
            raise ResourceCapExceeded("max_colourings", limit, observed=i + 1)
        yield colouring
