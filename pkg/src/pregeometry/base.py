"""
Pregeometry Interface

DESIGN DECISION: Every family implements three primitives.
- builder(): an incremental independence tester (add a point, learn whether
  the rank went up)
- _span(basis): the closure of an independent tuple
- parametrize(basis): closure points indexed by coefficient tuples

Everything else (closure, rank, θ predicates, flat enumeration, D counts) is
written once here on top of them.

Points are integers in [0, universe_size); iteration order is ascending
point index everywhere. Closures are memoised; the objects are otherwise
immutable after construction.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Protocol

import numpy as np
import structlog

from src.config import get_settings
from src.errors import DomainError, ResourceCapExceeded
from src.models.pregeometry import PregeometryKind, PregeometrySpec

logger = structlog.get_logger(__name__)

_CLOSURE_CACHE_LIMIT = 200_000


@dataclass(frozen=True)
class Flat:
    """
    A closed set.

    Two flats of one pregeometry are equal iff their canonical bases are
    equal. The canonical basis is the greedy basis of the member points taken
    in ascending order.
    """

    basis: tuple[int, ...]
    rank: int = field(compare=False)
    points: frozenset[int] = field(compare=False, repr=False)

    def __contains__(self, point: object) -> bool:
        return point in self.points

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.points))

    def issubset(self, other: 'Flat') -> bool:
        return self.points <= other.points


class IndependenceBuilder(Protocol):
    """Incremental rank computation."""

    @property
    def rank(self) -> int: ...

    def add(self, point: int) -> bool:
        """Add a point; True iff it was outside the closure of the points added so far."""
        ...


class Pregeometry(ABC):
    """A finite pregeometry on the points 0..universe_size-1."""

    kind: PregeometryKind

    def __init__(self, rank: int, q: Optional[int] = None):
        self._rank = rank
        self._q = q
        self._closure_cache: dict[frozenset[int], Flat] = {}
        self._one_dim: Optional[list[Flat]] = None
        self._flat_of_point: dict[int, int] = {}
        self._flat_array: Optional[np.ndarray] = None

    # =========================================================================
    # Family primitives
    # =========================================================================

    @property
    @abstractmethod
    def universe_size(self) -> int:
        pass

    @abstractmethod
    def builder(self) -> IndependenceBuilder:
        """A fresh independence builder."""
        pass

    @abstractmethod
    def _span(self, basis: tuple[int, ...]) -> frozenset[int]:
        """Closure of an independent tuple (not range-checked)."""
        pass

    @abstractmethod
    def parametrize(self, basis: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], int]]:
        """
        Yield (coefficients, point) pairs covering the closure of an
        independent tuple.

        Two independent tuples of equal length in pregeometries of the same
        family induce a closure isomorphism by matching coefficients.
        """
        pass

    # =========================================================================
    # Derived operations
    # =========================================================================

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def q(self) -> Optional[int]:
        return self._q

    @property
    def spec(self) -> PregeometrySpec:
        return PregeometrySpec(kind=self.kind, q=self._q, rank=self._rank)

    @property
    def universe(self) -> range:
        return range(self.universe_size)

    def check_points(self, s: Iterable[int]) -> tuple[int, ...]:
        """Sorted distinct points of s; DomainError on anything outside the universe."""
        pts = tuple(sorted(set(s)))
        size = self.universe_size
        for p in pts:
            if not isinstance(p, int) or p < 0 or p >= size:
                raise DomainError(
                    f"Point {p!r} outside universe of {self.spec.label()} (size {size})"
                )
        return pts

    def basis_of(self, s: Iterable[int]) -> tuple[int, ...]:
        """Greedy basis of s in ascending point order."""
        builder = self.builder()
        return tuple(p for p in self.check_points(s) if builder.add(p))

    def rank_of(self, s: Iterable[int]) -> int:
        builder = self.builder()
        for p in self.check_points(s):
            builder.add(p)
        return builder.rank

    def is_independent(self, s: Iterable[int]) -> bool:
        pts = list(s)
        if len(set(pts)) != len(pts):
            return False
        self.check_points(pts)
        builder = self.builder()
        return all(builder.add(p) for p in pts)

    def theta(self, args: Iterable[int], b: int) -> bool:
        """θ_k(a_1..a_k, b): b lies in the closure of the a_i."""
        builder = self.builder()
        for a in self.check_points(args):
            builder.add(a)
        self.check_points((b,))
        return not builder.add(b)

    def closure(self, s: Iterable[int]) -> Flat:
        key = frozenset(s)
        cached = self._closure_cache.get(key)
        if cached is not None:
            return cached
        flat = self._flat_from_basis(self.basis_of(key))
        if len(self._closure_cache) >= _CLOSURE_CACHE_LIMIT:
            self._closure_cache.clear()
        self._closure_cache[key] = flat
        return flat

    def is_closed(self, s: Iterable[int]) -> bool:
        pts = frozenset(s)
        return self.closure(pts).points == pts

    def empty_closure(self) -> Flat:
        return self.closure(())

    def _canonical_basis(self, points: frozenset[int], rank: int) -> tuple[int, ...]:
        builder = self.builder()
        out: list[int] = []
        for p in sorted(points):
            if len(out) == rank:
                break
            if builder.add(p):
                out.append(p)
        return tuple(out)

    def _flat_from_basis(self, basis: tuple[int, ...]) -> Flat:
        points = self._span(basis)
        return Flat(self._canonical_basis(points, len(basis)), len(basis), points)

    # =========================================================================
    # Rank-1 flats
    # =========================================================================

    def one_dim_flats(self) -> list[Flat]:
        """
        The rank-1 flats, ordered by their least point outside closure(∅).
        Together they partition universe minus closure(∅).
        """
        if self._one_dim is None:
            cl0 = self.empty_closure().points
            flats: list[Flat] = []
            index: dict[int, int] = {}
            for p in self.universe:
                if p in cl0 or p in index:
                    continue
                f = self._flat_from_basis((p,))
                for x in f.points - cl0:
                    index[x] = len(flats)
                flats.append(f)
            self._one_dim = flats
            self._flat_of_point = index
            logger.debug("one_dim_flats_built", pregeometry=self.spec.label(), count=len(flats))
        return self._one_dim

    @property
    def flat_count(self) -> int:
        return len(self.one_dim_flats())

    def flat_index_of_point(self, p: int) -> Optional[int]:
        """Index of the rank-1 flat containing p, None for p in closure(∅)."""
        self.one_dim_flats()
        return self._flat_of_point.get(p)

    def flat_index_array(self) -> np.ndarray:
        """Rank-1 flat index of every point, -1 on closure(∅)."""
        if self._flat_array is None:
            self.one_dim_flats()
            arr = np.full(self.universe_size, -1, dtype=np.int64)
            for p, i in self._flat_of_point.items():
                arr[p] = i
            arr.setflags(write=False)
            self._flat_array = arr
        return self._flat_array

    def flat_index(self, f: Flat) -> int:
        if f.rank != 1:
            raise DomainError(f"Flat {f.basis} has rank {f.rank}, not 1")
        idx = self.flat_index_of_point(f.basis[0])
        assert idx is not None
        return idx

    def flat_indices_in(self, points: Iterable[int]) -> list[int]:
        """Sorted indices of the rank-1 flats meeting the given points."""
        self.one_dim_flats()
        lookup = self._flat_of_point
        return sorted({lookup[p] for p in points if p in lookup})

    def D_count(self, f: Flat) -> int:
        """Number of rank-1 flats contained in f."""
        return len(self.flat_indices_in(f.points))

    # =========================================================================
    # Higher-rank flats
    # =========================================================================

    def flats_of_rank(self, k: int, cap: Optional[int] = None) -> list[Flat]:
        """
        All rank-k flats, each once, sorted by canonical basis.

        Rank-k flats are grown from rank-(k-1) flats by one rank-1 flat at a
        time and deduplicated by point set.
        """
        if k < 0 or k > self.rank:
            raise DomainError(f"No rank-{k} flats in {self.spec.label()}")
        limit = cap if cap is not None else get_settings().limits.max_flats
        if k == 0:
            return [self.empty_closure()]
        ones = self.one_dim_flats()
        if k == 1:
            if len(ones) > limit:
                raise ResourceCapExceeded("max_flats", limit, observed=len(ones))
            return sorted(ones, key=lambda f: f.basis)

        previous = self.flats_of_rank(k - 1, limit)
        seen: dict[frozenset[int], Flat] = {}
        for f in previous:
            for g in ones:
                rep = g.basis[0]
                if rep in f.points:
                    continue
                pts = self._span(f.basis + (rep,))
                if pts in seen:
                    continue
                seen[pts] = Flat(self._canonical_basis(pts, k), k, pts)
                if len(seen) > limit:
                    raise ResourceCapExceeded(
                        "max_flats",
                        limit,
                        observed=len(seen),
                        partial={"rank": k, "flats_so_far": len(seen)},
                    )
        flats = sorted(seen.values(), key=lambda f: f.basis)
        logger.debug("flats_enumerated", pregeometry=self.spec.label(), rank=k, count=len(flats))
        return flats

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec.label()}>"
