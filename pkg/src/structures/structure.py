"""
Relational and coloured structures over a pregeometry.

DESIGN DECISION: Structures are immutable values.
Every operation (reducts, substructures, substitution) builds a new object.
Equality and hashing go through `key`, so structures can be used as keys of
exact probability tables.

DESIGN DECISION: Colours live on points.
A ColouredStructure stores one colour per point (0 = no colour). The
colouring conditions (1) and (3) are therefore checkable facts about the
data rather than properties of the representation; the usual constructor
`from_flat_colours` produces point colours that satisfy them.

In symmetric-irreflexive mode each relation stores one sorted
representative per permutation orbit and expands on read.
"""

from functools import cached_property
from itertools import permutations
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

import numpy as np

from src.errors import DomainError, PreconditionError
from src.models.structure import Vocabulary
from src.pregeometry import Flat, Pregeometry

TupleSet = frozenset[tuple[int, ...]]


class RelStructure:
    """
    A pregeometry (or a closed part of one) with relation interpretations.

    Args:
        pg: Underlying pregeometry
        vocab: Relation vocabulary
        relations: symbol name -> tuples; missing symbols are empty
        universe: Closed flat the structure lives on (whole pregeometry when None)
    """

    def __init__(
        self,
        pg: Pregeometry,
        vocab: Vocabulary,
        relations: Optional[Mapping[str, Iterable[Sequence[int]]]] = None,
        universe: Optional[Flat] = None,
    ):
        self.pg = pg
        self.vocab = vocab
        self.universe = universe
        relations = relations or {}
        unknown = set(relations) - {s.name for s in vocab.symbols}
        if unknown:
            raise DomainError(f"Relations for unknown symbols: {sorted(unknown)}")
        points = self.point_set
        stored: dict[str, TupleSet] = {}
        for symbol in vocab.symbols:
            tuples: set[tuple[int, ...]] = set()
            for raw in relations.get(symbol.name, ()):
                tup = tuple(int(x) for x in raw)
                if len(tup) != symbol.arity:
                    raise DomainError(
                        f"{symbol.name} has arity {symbol.arity}, got tuple {tup}"
                    )
                for x in tup:
                    if x not in points:
                        raise DomainError(f"Tuple {tup} leaves the universe of {pg.spec.label()}")
                if vocab.symmetric_irreflexive:
                    if len(set(tup)) != len(tup):
                        raise PreconditionError(
                            f"Symmetric-irreflexive {symbol.name} needs distinct entries, got {tup}"
                        )
                    tup = tuple(sorted(tup))
                tuples.add(tup)
            stored[symbol.name] = frozenset(tuples)
        self._stored = stored

    # =========================================================================
    # Universe
    # =========================================================================

    @cached_property
    def point_set(self) -> frozenset[int]:
        if self.universe is None:
            return frozenset(self.pg.universe)
        return self.universe.points

    @cached_property
    def points(self) -> tuple[int, ...]:
        return tuple(sorted(self.point_set))

    @property
    def rank(self) -> int:
        return self.pg.rank if self.universe is None else self.universe.rank

    @cached_property
    def flat_indices(self) -> list[int]:
        """Indices (in pg flat order) of the rank-1 flats inside the universe."""
        if self.universe is None:
            return list(range(self.pg.flat_count))
        return self.pg.flat_indices_in(self.universe.points)

    def is_whole(self) -> bool:
        return self.universe is None or len(self.universe.points) == self.pg.universe_size

    # =========================================================================
    # Relations
    # =========================================================================

    def stored(self, name: str) -> TupleSet:
        """Stored tuples (orbit representatives in symmetric mode)."""
        return self._stored[name]

    def tuples(self, name: str) -> Iterator[tuple[int, ...]]:
        """Every tuple in the interpretation of `name`."""
        if not self.vocab.symmetric_irreflexive:
            yield from sorted(self._stored[name])
            return
        for rep in sorted(self._stored[name]):
            yield from permutations(rep)

    def all_tuples(self) -> Iterator[tuple[str, tuple[int, ...]]]:
        """(symbol, stored tuple) pairs in deterministic order."""
        for symbol in self.vocab.symbols:
            for tup in sorted(self._stored[symbol.name]):
                yield symbol.name, tup

    def holds(self, name: str, tup: Sequence[int]) -> bool:
        t = tuple(tup)
        if self.vocab.symmetric_irreflexive:
            if len(set(t)) != len(t):
                return False
            t = tuple(sorted(t))
        return t in self._stored[name]

    @property
    def tuple_count(self) -> int:
        return sum(len(v) for v in self._stored.values())

    def has_relations(self) -> bool:
        return any(self._stored.values())

    @cached_property
    def _position_index(self) -> dict[tuple[str, int, int], list[tuple[int, ...]]]:
        index: dict[tuple[str, int, int], list[tuple[int, ...]]] = {}
        for symbol in self.vocab.symbols:
            for tup in self.tuples(symbol.name):
                for pos, value in enumerate(tup):
                    index.setdefault((symbol.name, pos, value), []).append(tup)
        return index

    def tuples_with(self, name: str, position: int, value: int) -> list[tuple[int, ...]]:
        """Expanded tuples of `name` carrying `value` at `position`."""
        return self._position_index.get((name, position, value), [])

    def tuples_touching(self, name: str, value: int) -> Iterator[tuple[int, ...]]:
        arity = self.vocab.symbol(name).arity
        seen: set[tuple[int, ...]] = set()
        for pos in range(arity):
            for tup in self.tuples_with(name, pos, value):
                if tup not in seen:
                    seen.add(tup)
                    yield tup

    # =========================================================================
    # Derived structures
    # =========================================================================

    def with_relations(self, relations: Mapping[str, Iterable[Sequence[int]]]) -> 'RelStructure':
        return RelStructure(self.pg, self.vocab, relations, self.universe)

    def restrict(self, universe: Flat) -> 'RelStructure':
        """Restriction to a closed flat (closedness is checked by the caller)."""
        pts = universe.points
        return RelStructure(
            self.pg,
            self.vocab,
            {
                name: [t for t in tuples if all(x in pts for x in t)]
                for name, tuples in self._stored.items()
            },
            universe,
        )

    # =========================================================================
    # Identity
    # =========================================================================

    @property
    def key(self) -> tuple:
        return (
            self.pg.spec,
            self.vocab,
            self.points if not self.is_whole() else None,
            tuple(tuple(sorted(self._stored[s.name])) for s in self.vocab.symbols),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RelStructure) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"<RelStructure {self.pg.spec.label()} tuples={self.tuple_count}>"


class ColouredStructure:
    """
    A RelStructure together with colours P_1..P_l on its points.

    `reduct_level` is None for full structures and d for a d-dimensional
    reduct; the 0-reduct carries no colours.
    """

    def __init__(
        self,
        base: RelStructure,
        l: int,
        point_colours: Union[np.ndarray, Sequence[int]],
        reduct_level: Optional[int] = None,
    ):
        if l < 1:
            raise DomainError(f"Colour count must be positive, got {l}")
        colours = np.asarray(point_colours, dtype=np.int16)
        if colours.shape != (base.pg.universe_size,):
            raise DomainError(
                f"Expected {base.pg.universe_size} point colours, got shape {colours.shape}"
            )
        if colours.size and (colours.min() < 0 or colours.max() > l):
            raise DomainError(f"Point colours must lie in 0..{l}")
        colours = colours.copy()
        colours.setflags(write=False)
        self.base = base
        self.l = l
        self.point_colours = colours
        self.reduct_level = reduct_level

    @classmethod
    def from_flat_colours(
        cls,
        base: RelStructure,
        l: int,
        colouring: Union[Sequence[int], np.ndarray, Mapping[Flat, int]],
        reduct_level: Optional[int] = None,
    ) -> 'ColouredStructure':
        """
        Colour every point by its rank-1 flat.

        `colouring` is either indexed by pg flat index (length flat_count)
        or a mapping Flat -> colour. Flats outside the universe are ignored.
        """
        pg = base.pg
        flat_colours = np.zeros(pg.flat_count, dtype=np.int16)
        if isinstance(colouring, Mapping):
            for flat, colour in colouring.items():
                flat_colours[pg.flat_index(flat)] = colour
        else:
            arr = np.asarray(colouring, dtype=np.int16)
            if arr.shape != (pg.flat_count,):
                raise DomainError(f"Expected {pg.flat_count} flat colours, got shape {arr.shape}")
            flat_colours[:] = arr
        if base.universe is not None:
            inside = np.zeros(pg.flat_count, dtype=bool)
            inside[base.flat_indices] = True
            flat_colours[~inside] = 0
        padded = np.append(flat_colours, 0)
        return cls(base, l, padded[pg.flat_index_array()], reduct_level)

    # Delegation to the relational part.

    @property
    def pg(self) -> Pregeometry:
        return self.base.pg

    @property
    def vocab(self) -> Vocabulary:
        return self.base.vocab

    @property
    def universe(self) -> Optional[Flat]:
        return self.base.universe

    @property
    def points(self) -> tuple[int, ...]:
        return self.base.points

    @property
    def point_set(self) -> frozenset[int]:
        return self.base.point_set

    @property
    def rank(self) -> int:
        return self.base.rank

    def holds(self, name: str, tup: Sequence[int]) -> bool:
        return self.base.holds(name, tup)

    def tuples(self, name: str) -> Iterator[tuple[int, ...]]:
        return self.base.tuples(name)

    def all_tuples(self) -> Iterator[tuple[str, tuple[int, ...]]]:
        return self.base.all_tuples()

    # Colours.

    @property
    def has_colours(self) -> bool:
        return self.reduct_level is None or self.reduct_level >= 1

    def colour_of_point(self, p: int) -> int:
        """Colour of p, 0 when p has none."""
        return int(self.point_colours[p])

    def colour_of_flat(self, flat: Flat) -> int:
        return self.colour_of_point(flat.basis[0])

    @cached_property
    def colouring(self) -> tuple[int, ...]:
        """
        Flat colour vector in pg flat order (colour of each flat's first
        basis point, 0 for flats outside the universe).
        """
        return tuple(int(self.point_colours[f.basis[0]]) for f in self.pg.one_dim_flats())

    def colour_map(self) -> dict[Flat, int]:
        flats = self.pg.one_dim_flats()
        return {flats[i]: self.colouring[i] for i in self.base.flat_indices}

    def with_base(self, base: RelStructure) -> 'ColouredStructure':
        return ColouredStructure(base, self.l, self.point_colours, self.reduct_level)

    @property
    def key(self) -> tuple:
        return (self.base.key, self.l, self.reduct_level, self.point_colours.tobytes())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ColouredStructure) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return (
            f"<ColouredStructure {self.pg.spec.label()} l={self.l} "
            f"colouring={self.colouring} tuples={self.base.tuple_count}>"
        )


AnyStructure = Union[RelStructure, ColouredStructure]


def relational_part(s: AnyStructure) -> RelStructure:
    return s.base if isinstance(s, ColouredStructure) else s
