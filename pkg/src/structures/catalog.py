"""
Candidate tuples and colouring-dependent admissibility.

DESIGN DECISION: Admissibility is a numpy mask over grouped arrays.
Every tuple whose closure has rank >= 2 is a candidate (rank <= 1 tuples can
never be related: their closure holds at most one colour). Candidates are
grouped by the number D of rank-1 flats in their closure, so one group is
three dense arrays:

    tuples         [n, arity]  the tuple entries
    closure_flats  [n, D]      rank-1 flats inside the closure
    entry_flats    [n, arity]  flat of each entry, -1 on closure(∅)

and a colouring decides admissibility of the whole group with one fancy
index. Catalogs above `max_tuples` candidates are not materialised; their
groups are regenerated chunk by chunk on every pass.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterator, Optional

import numpy as np
import structlog

from src.config import get_settings
from src.models.structure import ColourRule, Vocabulary
from src.pregeometry import Flat, Pregeometry

logger = structlog.get_logger(__name__)

_CHUNK = 65_536


@lru_cache(maxsize=64)
def _surjections(arity: int, k: int) -> np.ndarray:
    """Index patterns of length `arity` using each of 0..k-1 at least once."""
    rows = [p for p in product(range(k), repeat=arity) if len(set(p)) == k]
    return np.array(rows, dtype=np.int64).reshape(-1, arity)


@dataclass(frozen=True)
class TupleGroup:
    """Candidate tuples of one arity whose closures contain D rank-1 flats."""

    arity: int
    tuples: np.ndarray
    closure_flats: np.ndarray
    entry_flats: np.ndarray

    def __len__(self) -> int:
        return len(self.tuples)

    def admissible_mask(
        self,
        flat_colours: np.ndarray,
        strong: bool = False,
        colour_rule: ColourRule = ColourRule.CLOSURE,
    ) -> np.ndarray:
        """
        Which tuples may be related under the colouring.

        `flat_colours` is indexed by pg flat index. In strong mode all flats
        of the closure must differ; that already gives two differently
        coloured entries, so the colour rule only matters for weak mode.
        """
        c = flat_colours[self.closure_flats]
        if strong:
            s = np.sort(c, axis=1)
            return np.all(s[:, 1:] != s[:, :-1], axis=1)
        if colour_rule == ColourRule.TUPLE:
            padded = np.append(flat_colours, 0)
            e = padded[self.entry_flats]
            hi = e.max(axis=1)
            lo = np.where(e > 0, e, np.iinfo(e.dtype).max).min(axis=1)
            return lo < hi
        return np.any(c != c[:, :1], axis=1)


class TupleCatalog:
    """
    All candidate tuples of a structure's universe, per arity.

    Args:
        pg: Pregeometry
        vocab: Vocabulary (only the arities and the symmetry mode matter)
        universe: Closed flat to restrict to (whole pregeometry when None)
        max_tuples: Materialisation threshold (settings default)
    """

    def __init__(
        self,
        pg: Pregeometry,
        vocab: Vocabulary,
        universe: Optional[Flat] = None,
        max_tuples: Optional[int] = None,
    ):
        self.pg = pg
        self.symmetric = vocab.symmetric_irreflexive
        self.arities = sorted({s.arity for s in vocab.symbols})
        self.points = tuple(sorted(universe.points)) if universe is not None else tuple(pg.universe)
        self.max_tuples = max_tuples if max_tuples is not None else get_settings().limits.max_tuples
        self._cache: dict[int, list[TupleGroup]] = {}

    def upper_bound(self, arity: int) -> int:
        """Candidate count before the rank filter."""
        size = len(self.points)
        return comb(size, arity) if self.symmetric else size ** arity

    def is_streamed(self, arity: int) -> bool:
        return self.upper_bound(arity) > self.max_tuples

    def groups(self, arity: int) -> Iterator[TupleGroup]:
        """Candidate groups of one arity, in a deterministic order."""
        if arity in self._cache:
            yield from self._cache[arity]
            return
        if self.is_streamed(arity):
            logger.debug("tuple_catalog_streamed", arity=arity, bound=self.upper_bound(arity))
            yield from self._generate(arity)
            return
        built = list(self._generate(arity))
        self._cache[arity] = built
        logger.debug(
            "tuple_catalog_built",
            pregeometry=self.pg.spec.label(),
            arity=arity,
            candidates=sum(len(g) for g in built),
        )
        yield from built

    def candidate_count(self, arity: int) -> int:
        return sum(len(g) for g in self.groups(arity))

    def _generate(self, arity: int) -> Iterator[TupleGroup]:
        pg = self.pg
        flat_lookup = pg.flat_index_array()
        sizes = [arity] if self.symmetric else list(range(2, arity + 1))
        pending: dict[tuple[int, int], tuple[list[tuple[int, ...]], list[list[int]]]] = {}
        pending_count = 0
        closure_flats: dict[tuple[int, ...], list[int]] = {}

        def flush() -> Iterator[TupleGroup]:
            for (k, _), (sets, flats) in sorted(pending.items()):
                # symmetric mode keeps the sorted representative only
                patterns = np.arange(arity).reshape(1, arity) if self.symmetric else _surjections(arity, k)
                base = np.array(sets, dtype=np.int64)
                tuples = base[:, patterns].reshape(-1, arity)
                cf = np.repeat(np.array(flats, dtype=np.int64), len(patterns), axis=0)
                yield TupleGroup(arity, tuples, cf, flat_lookup[tuples])
            pending.clear()

        for k in sizes:
            for subset in combinations(self.points, k):
                flat = pg.closure(subset)
                if flat.rank < 2:
                    continue
                inside = closure_flats.get(flat.basis)
                if inside is None:
                    inside = pg.flat_indices_in(flat.points)
                    closure_flats[flat.basis] = inside
                sets, flats = pending.setdefault((k, len(inside)), ([], []))
                sets.append(subset)
                flats.append(inside)
                pending_count += 1
                if pending_count >= _CHUNK:
                    yield from flush()
                    pending_count = 0
        yield from flush()


def admissible_tuples(
    catalog: TupleCatalog,
    vocab: Vocabulary,
    flat_colours: np.ndarray,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> list[tuple[str, tuple[int, ...]]]:
    """(symbol, tuple) pairs that may be related under the colouring."""
    out: list[tuple[str, tuple[int, ...]]] = []
    for symbol in vocab.symbols:
        for group in catalog.groups(symbol.arity):
            mask = group.admissible_mask(flat_colours, strong, colour_rule)
            out.extend((symbol.name, tuple(int(x) for x in row)) for row in group.tuples[mask])
    return out


def admissible_count(
    catalog: TupleCatalog,
    vocab: Vocabulary,
    flat_colours: np.ndarray,
    strong: bool = False,
    colour_rule: ColourRule = ColourRule.CLOSURE,
) -> int:
    total = 0
    for symbol in vocab.symbols:
        for group in catalog.groups(symbol.arity):
            total += int(group.admissible_mask(flat_colours, strong, colour_rule).sum())
    return total


@lru_cache(maxsize=32)
def catalog_for(pg: Pregeometry, vocab: Vocabulary) -> TupleCatalog:
    """Shared whole-universe catalog (sampling reuses it across samples)."""
    return TupleCatalog(pg, vocab)
