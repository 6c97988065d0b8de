"""
Embeddings, isomorphism and extension properties.

DESIGN DECISION: Embeddings are found by backtracking over A's points.
A basis of A is mapped first, then the remaining points, so after the basis
every candidate image is confined to the closure of what is already mapped.
A map preserves every closure predicate as soon as it preserves
"p ∈ cl(S)" for all S of size <= rank(A); that is the check applied per
assigned point, together with both directions of every relation and, when
both sides are coloured, the colours.

Iso-type catalogs for the extension property are built by exhaustive
enumeration, bucketed by cheap invariants, then split by pairwise
isomorphism tests.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Optional

import structlog

from src.config import get_settings
from src.errors import PreconditionError, ResourceCapExceeded
from src.models.pregeometry import PregeometrySpec
from src.models.structure import ColourRule, Vocabulary
from src.pregeometry import Flat, build_pregeometry
from src.structures.enumerate import enumerate_coloured
from src.structures.operations import closed_substructure
from src.structures.structure import AnyStructure, ColouredStructure, relational_part

logger = structlog.get_logger(__name__)

PointMap = dict[int, int]


def _colour_aware(a: AnyStructure, m: AnyStructure) -> bool:
    return (
        isinstance(a, ColouredStructure)
        and isinstance(m, ColouredStructure)
        and a.has_colours
        and m.has_colours
    )


class _EmbeddingSearch:
    """One backtracking search; not reusable."""

    def __init__(
        self,
        a: AnyStructure,
        m: AnyStructure,
        require_closed_image: bool,
        limit: Optional[int],
    ):
        self.a = a
        self.m = m
        self.rel_a = relational_part(a)
        self.rel_m = relational_part(m)
        self.coloured = _colour_aware(a, m)
        self.require_closed_image = require_closed_image
        self.limit = limit
        self.rank_a = a.rank
        self.mapping: PointMap = {}
        self.inverse: dict[int, int] = {}
        self.results: list[PointMap] = []

    def order(self, fixed: Mapping[int, int]) -> list[int]:
        """Fixed points, then the rest of a greedy basis, then everything else."""
        pg = self.a.pg
        builder = pg.builder()
        order: list[int] = []
        for p in fixed:
            builder.add(p)
            order.append(p)
        rest = [p for p in self.a.points if p not in fixed]
        basis = [p for p in rest if builder.add(p)]
        taken = set(basis)
        return order + basis + [p for p in rest if p not in taken]

    def candidates(self, p: int) -> list[int]:
        pa, pm = self.a.pg, self.m.pg
        mapped = list(self.mapping)
        inside_a = p in pa.closure(mapped).points
        image_closure = pm.closure(self.mapping.values()).points
        if inside_a:
            pool = [x for x in image_closure if x in self.m.point_set]
        else:
            pool = [x for x in self.m.point_set if x not in image_closure]
        return sorted(x for x in pool if x not in self.inverse)

    def consistent(self, p: int, image: int) -> bool:
        if image in self.inverse or image not in self.m.point_set:
            return False
        a, m = self.a, self.m
        if self.coloured and a.colour_of_point(p) != m.colour_of_point(image):  # type: ignore[union-attr]
            return False

        pa, pm = a.pg, m.pg
        mapped = list(self.mapping.items())
        for size in range(0, min(self.rank_a, len(mapped)) + 1):
            for subset in combinations(mapped, size):
                src = [s for s, _ in subset]
                dst = [d for _, d in subset]
                if (p in pa.closure(src).points) != (image in pm.closure(dst).points):
                    return False

        mapping = dict(self.mapping)
        mapping[p] = image
        inverse = dict(self.inverse)
        inverse[image] = p
        for symbol in a.vocab.symbols:
            name = symbol.name
            for tup in self.rel_a.tuples_touching(name, p):
                if all(x in mapping for x in tup):
                    if not self.rel_m.holds(name, [mapping[x] for x in tup]):
                        return False
            for tup in self.rel_m.tuples_touching(name, image):
                if all(x in inverse for x in tup):
                    if not self.rel_a.holds(name, [inverse[x] for x in tup]):
                        return False
        return True

    def assign(self, p: int, image: int) -> None:
        self.mapping[p] = image
        self.inverse[image] = p

    def unassign(self, p: int) -> None:
        del self.inverse[self.mapping.pop(p)]

    def run(self, fixed: Mapping[int, int]) -> list[PointMap]:
        for p, image in fixed.items():
            if p not in self.a.point_set or not self.consistent(p, image):
                return []
            self.assign(p, image)
        order = self.order(fixed)
        self._extend(order, len(fixed))
        return self.results

    def _done(self) -> bool:
        return self.limit is not None and len(self.results) >= self.limit

    def _extend(self, order: list[int], depth: int) -> None:
        if depth == len(order):
            if self.require_closed_image and not self.m.pg.is_closed(self.inverse):
                return
            self.results.append(dict(self.mapping))
            return
        p = order[depth]
        for image in self.candidates(p):
            if not self.consistent(p, image):
                continue
            self.assign(p, image)
            self._extend(order, depth + 1)
            self.unassign(p)
            if self._done():
                return


def find_embeddings(
    a: AnyStructure,
    m: AnyStructure,
    require_closed_image: bool = False,
    limit: Optional[int] = None,
    fixed: Optional[Mapping[int, int]] = None,
) -> list[PointMap]:
    """
    Embeddings of a into m, in lexicographic order of images along a's
    mapping order.

    `fixed` pins some images in advance; an inconsistent pin yields no
    embedding.

    Raises:
        PreconditionError: the vocabularies differ
    """
    if a.vocab != m.vocab:
        raise PreconditionError("Embeddings need a common vocabulary")
    if a.pg.kind != m.pg.kind or a.pg.q != m.pg.q:
        return []
    if len(a.points) > len(m.points):
        return []
    search = _EmbeddingSearch(a, m, require_closed_image, limit)
    return search.run(dict(fixed or {}))


def is_isomorphic(a: AnyStructure, b: AnyStructure) -> bool:
    """A closed, bijective embedding exists."""
    if len(a.points) != len(b.points) or a.rank != b.rank or a.vocab != b.vocab:
        return False
    if isinstance(a, ColouredStructure) != isinstance(b, ColouredStructure):
        return False
    if isinstance(a, ColouredStructure) and (a.l, a.reduct_level) != (b.l, b.reduct_level):  # type: ignore[union-attr]
        return False
    return bool(find_embeddings(a, b, require_closed_image=True, limit=1))


def has_extension_property(m: AnyStructure, b: AnyStructure, a_flat: Flat) -> bool:
    """
    m has the B/A-extension property: every closed embedding of A = B↾a_flat
    into m extends to a closed embedding of B.
    """
    a = closed_substructure(b, a_flat)
    for g in find_embeddings(a, m, require_closed_image=True):
        if not find_embeddings(b, m, require_closed_image=True, limit=1, fixed=g):
            logger.debug("extension_missing", base_embedding=g)
            return False
    return True


@dataclass(frozen=True)
class ExtensionPair:
    """A structure B and a proper closed flat A of it."""

    b: ColouredStructure
    a_flat: Flat

    @property
    def rank(self) -> int:
        return self.b.rank


def _invariant(s: ColouredStructure) -> tuple:
    counts = [0] * (s.l + 1)
    for c in s.colouring:
        counts[c] += 1
    return (
        tuple(counts),
        tuple(len(s.base.stored(sym.name)) for sym in s.vocab.symbols),
    )


def iso_representatives(structures: list[ColouredStructure]) -> list[ColouredStructure]:
    """One structure per isomorphism type, first occurrence kept."""
    buckets: dict[tuple, list[ColouredStructure]] = {}
    reps: list[ColouredStructure] = []
    for s in structures:
        bucket = buckets.setdefault(_invariant(s), [])
        if any(is_isomorphic(s, r) for r in bucket):
            continue
        bucket.append(s)
        reps.append(s)
    return reps


def build_extension_catalog(
    family: PregeometrySpec,
    vocab: Vocabulary,
    l: int,
    strong: bool,
    k: int,
    colour_rule: ColourRule = ColourRule.CLOSURE,
    cap: Optional[int] = None,
) -> list[ExtensionPair]:
    """
    Pairs (B, A) with rank(B) <= k, B up to isomorphism, A ranging over all
    proper closed flats of B.

    Raises:
        ResourceCapExceeded: more than max_enumeration pairs
    """
    limit = cap if cap is not None else get_settings().limits.max_enumeration
    pairs: list[ExtensionPair] = []
    for r in range(1, k + 1):
        pg = build_pregeometry(family.with_rank(r))
        reps = iso_representatives(enumerate_coloured(pg, vocab, l, strong, colour_rule))
        flats = [f for s in range(r) for f in pg.flats_of_rank(s)]
        for b in reps:
            for f in flats:
                pairs.append(ExtensionPair(b, f))
                if len(pairs) > limit:
                    raise ResourceCapExceeded(
                        "max_enumeration",
                        limit,
                        observed=len(pairs),
                        partial={"rank": r, "pairs_so_far": len(pairs)},
                    )
        logger.debug("extension_catalog_level", rank=r, types=len(reps), pairs=len(pairs))
    return pairs


def k_extension_property(m: AnyStructure, k: int, catalog: list[ExtensionPair]) -> bool:
    """Every catalog pair with rank(B) <= k passes has_extension_property."""
    return all(
        has_extension_property(m, pair.b, pair.a_flat)
        for pair in catalog
        if pair.rank <= k
    )
