"""Trivial pregeometry: every set is closed."""

from typing import Iterator

from src.models.pregeometry import PregeometryKind
from src.pregeometry.base import Pregeometry


class _DistinctBuilder:
    def __init__(self) -> None:
        self._seen: set[int] = set()

    @property
    def rank(self) -> int:
        return len(self._seen)

    def add(self, point: int) -> bool:
        if point in self._seen:
            return False
        self._seen.add(point)
        return True


class TrivialPregeometry(Pregeometry):
    """`size` points, closure is the identity, rank equals size."""

    kind = PregeometryKind.TRIVIAL

    def __init__(self, size: int):
        super().__init__(rank=size, q=None)

    @property
    def universe_size(self) -> int:
        return self._rank

    def builder(self) -> _DistinctBuilder:
        return _DistinctBuilder()

    def _span(self, basis: tuple[int, ...]) -> frozenset[int]:
        return frozenset(basis)

    def parametrize(self, basis: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], int]]:
        k = len(basis)
        for i, b in enumerate(basis):
            yield tuple(1 if j == i else 0 for j in range(k)), b
