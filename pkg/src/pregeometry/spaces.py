"""
Vector, affine and projective spaces over a prime field.

DESIGN DECISION: All three reuse the linear machinery of
src.pregeometry.vector.
- LinearSpace(q, n): the points of GF(q)^n, closure = span, rank n.
- AffineSpace(q, r): the points of GF(q)^(r-1), closure of a nonempty set
  S = s0 + span(s - s0 : s in S), rank r.
- ProjectiveSpace(q, r): normalised nonzero vectors of GF(q)^r (first
  nonzero coordinate 1), closure = normalised vectors of the span, rank r.
"""

from typing import Iterator, Optional

import galois
import numpy as np

from src.models.pregeometry import PregeometryKind
from src.pregeometry.base import Pregeometry
from src.pregeometry.vector import DigitCodec, VectorBasis, coefficient_rows, make_basis


class _FieldSpace(Pregeometry):
    """Shared plumbing for the field-backed families."""

    def __init__(self, q: int, rank: int, vector_length: int):
        super().__init__(rank=rank, q=q)
        self.codec = DigitCodec(q, vector_length)
        self._field: Optional[type[galois.FieldArray]] = galois.GF(q) if q != 2 else None

    def _vector_basis(self) -> VectorBasis:
        return make_basis(self.codec, self._field)

    def vector(self, p: int) -> np.ndarray:
        """Coordinate digits of a vector-encoded integer."""
        return self.codec.decode(p)


class LinearSpace(_FieldSpace):
    kind = PregeometryKind.LINEAR

    def __init__(self, q: int, rank: int):
        super().__init__(q, rank, rank)

    @property
    def universe_size(self) -> int:
        return self.codec.q ** self._rank

    def builder(self) -> VectorBasis:
        return self._vector_basis()

    def point(self, digits) -> int:
        return self.codec.encode(digits)

    def _span(self, basis: tuple[int, ...]) -> frozenset[int]:
        vb = self._vector_basis()
        for p in basis:
            vb.add(p)
        return frozenset(vb.span_ints())

    def parametrize(self, basis: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], int]]:
        coeffs = coefficient_rows(self.codec.q, len(basis))
        points = self.codec.combine(basis, coeffs)
        for row, p in zip(coeffs, points):
            yield tuple(int(c) for c in row), int(p)


class _AffineBuilder:
    """Rank of an affine point set: 1 + linear rank of differences to the first point."""

    def __init__(self, space: 'AffineSpace'):
        self._space = space
        self._origin: Optional[int] = None
        self._differences = space._vector_basis()

    @property
    def rank(self) -> int:
        return 0 if self._origin is None else 1 + self._differences.rank

    def add(self, point: int) -> bool:
        if self._origin is None:
            self._origin = point
            return True
        return self._differences.add(self._space.codec.sub(point, self._origin))


class AffineSpace(_FieldSpace):
    kind = PregeometryKind.AFFINE

    def __init__(self, q: int, rank: int):
        self.dimension = max(rank - 1, 0)
        super().__init__(q, rank, self.dimension)

    @property
    def universe_size(self) -> int:
        return 0 if self._rank == 0 else self.codec.q ** self.dimension

    def builder(self) -> _AffineBuilder:
        return _AffineBuilder(self)

    def _span(self, basis: tuple[int, ...]) -> frozenset[int]:
        if not basis:
            return frozenset()
        origin = basis[0]
        vb = self._vector_basis()
        for p in basis[1:]:
            vb.add(self.codec.sub(p, origin))
        directions = vb.span_ints()
        if self.codec.q == 2:
            return frozenset(origin ^ d for d in directions)
        shifted = self.codec.decode_many(directions) + self.codec.decode(origin)
        return frozenset(int(p) for p in self.codec.encode_many(shifted))

    def parametrize(self, basis: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], int]]:
        if not basis:
            return
        origin = basis[0]
        differences = tuple(self.codec.sub(p, origin) for p in basis[1:])
        coeffs = coefficient_rows(self.codec.q, len(differences))
        directions = self.codec.combine(differences, coeffs)
        for row, d in zip(coeffs, directions):
            yield tuple(int(c) for c in row), self.codec.add(origin, int(d))


class _ProjectiveBuilder:
    def __init__(self, space: 'ProjectiveSpace'):
        self._vectors = space.vectors
        self._basis = space._vector_basis()

    @property
    def rank(self) -> int:
        return self._basis.rank

    def add(self, point: int) -> bool:
        return self._basis.add(int(self._vectors[point]))


class ProjectiveSpace(_FieldSpace):
    kind = PregeometryKind.PROJECTIVE

    def __init__(self, q: int, rank: int):
        super().__init__(q, rank, rank)
        self.vectors = self._normalised_vectors()
        self._index = {int(v): i for i, v in enumerate(self.vectors)}

    def _normalised_vectors(self) -> np.ndarray:
        q = self.codec.q
        candidates = np.arange(1, q ** self._rank, dtype=np.int64)
        if candidates.size == 0:
            return candidates
        digits = self.codec.decode_many(candidates)
        lead = digits[np.arange(len(digits)), np.argmax(digits != 0, axis=1)]
        return candidates[lead == 1]

    @property
    def universe_size(self) -> int:
        return len(self.vectors)

    def point_of_vector(self, v: int) -> int:
        """Point index of the normalised multiple of a nonzero vector."""
        q = self.codec.q
        if q != 2:
            digits = self.codec.decode(v)
            lead = int(digits[np.flatnonzero(digits)[0]])
            v = self.codec.encode(digits * pow(lead, q - 2, q))
        return self._index[int(v)]

    def builder(self) -> _ProjectiveBuilder:
        return _ProjectiveBuilder(self)

    def _span(self, basis: tuple[int, ...]) -> frozenset[int]:
        vb = self._vector_basis()
        for p in basis:
            vb.add(int(self.vectors[p]))
        index = self._index
        return frozenset(index[v] for v in vb.span_ints() if v in index)

    def parametrize(self, basis: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], int]]:
        vecs = tuple(int(self.vectors[p]) for p in basis)
        coeffs = coefficient_rows(self.codec.q, len(vecs))
        combos = self.codec.combine(vecs, coeffs)
        for row, v in zip(coeffs, combos):
            if v:
                yield tuple(int(c) for c in row), self.point_of_vector(int(v))
