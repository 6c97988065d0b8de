"""
Prime-field vector arithmetic on integer-encoded points.

A vector of GF(q)^m is stored as the integer whose base-q digits, most
significant first, are its coordinates. Over GF(2) this makes vector
addition a machine-word XOR.

DESIGN DECISION: Two basis implementations.
GF(2) uses an integer XOR basis (leading bit -> row). Odd prime fields use
galois field arrays kept in reduced row echelon form.
"""

from itertools import product
from typing import Iterable, Optional, Union

import galois
import numpy as np


class DigitCodec:
    """Integer <-> base-q digit vector, most significant digit first."""

    def __init__(self, q: int, length: int):
        self.q = q
        self.length = length
        self._weights = q ** np.arange(length - 1, -1, -1, dtype=np.int64)

    def encode(self, digits: Iterable[int]) -> int:
        arr = np.asarray(list(digits), dtype=np.int64) % self.q
        return int(arr @ self._weights) if self.length else 0

    def encode_many(self, rows: np.ndarray) -> np.ndarray:
        arr = np.asarray(rows, dtype=np.int64)
        if self.length == 0:
            return np.zeros(arr.shape[0] if arr.ndim else 1, dtype=np.int64)
        arr = arr.reshape(-1, self.length) % self.q
        return arr @ self._weights

    def decode(self, value: int) -> np.ndarray:
        return (int(value) // self._weights) % self.q

    def decode_many(self, values: Iterable[int]) -> np.ndarray:
        arr = np.asarray(list(values), dtype=np.int64)
        return (arr[:, None] // self._weights[None, :]) % self.q

    def add(self, a: int, b: int) -> int:
        if self.q == 2:
            return a ^ b
        return self.encode(self.decode(a) + self.decode(b))

    def sub(self, a: int, b: int) -> int:
        if self.q == 2:
            return a ^ b
        return self.encode(self.decode(a) - self.decode(b))

    def combine(self, basis: tuple[int, ...], coeffs: np.ndarray) -> np.ndarray:
        """Points sum_i coeffs[r, i] * basis[i] for every coefficient row r."""
        if not basis:
            return np.zeros(len(coeffs), dtype=np.int64)
        matrix = self.decode_many(basis)
        return self.encode_many((np.asarray(coeffs, dtype=np.int64) @ matrix) % self.q)


def coefficient_rows(q: int, k: int) -> np.ndarray:
    """All q^k coefficient tuples in lexicographic order, shape (q^k, k)."""
    return np.array(list(product(range(q), repeat=k)), dtype=np.int64).reshape(q ** k, k)


class XorBasis:
    """Incremental basis of a GF(2) vector space over integer bit vectors."""

    def __init__(self) -> None:
        self._rows: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, x: int) -> int:
        rows = self._rows
        while x:
            row = rows.get(x.bit_length() - 1)
            if row is None:
                return x
            x ^= row
        return 0

    def add(self, x: int) -> bool:
        r = self.reduce(x)
        if r == 0:
            return False
        self._rows[r.bit_length() - 1] = r
        return True

    def contains(self, x: int) -> bool:
        return self.reduce(x) == 0

    def span_ints(self) -> list[int]:
        out = [0]
        for row in self._rows.values():
            out += [v ^ row for v in out]
        return out


class PrimeFieldBasis:
    """Incremental reduced-row-echelon basis of GF(q)^m for an odd prime q."""

    def __init__(self, field: type[galois.FieldArray], codec: DigitCodec):
        self._field = field
        self._codec = codec
        self._rows: list[galois.FieldArray] = []
        self._pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, v: galois.FieldArray) -> galois.FieldArray:
        for pivot, row in zip(self._pivots, self._rows):
            if v[pivot] != 0:
                v = v - v[pivot] * row
        return v

    def add(self, x: int) -> bool:
        v = self._reduce(self._field(self._codec.decode(x)))
        nonzero = np.flatnonzero(v.view(np.ndarray))
        if nonzero.size == 0:
            return False
        lead = int(nonzero[0])
        v = v / v[lead]
        for i, row in enumerate(self._rows):
            if row[lead] != 0:
                self._rows[i] = row - row[lead] * v
        self._rows.append(v)
        self._pivots.append(lead)
        return True

    def contains(self, x: int) -> bool:
        v = self._reduce(self._field(self._codec.decode(x)))
        return not np.any(v.view(np.ndarray))

    def span_ints(self) -> list[int]:
        if not self._rows:
            return [0]
        coeffs = self._field(coefficient_rows(self._codec.q, len(self._rows)))
        vectors = coeffs @ self._field(np.vstack([r.view(np.ndarray) for r in self._rows]))
        return [int(v) for v in self._codec.encode_many(vectors.view(np.ndarray))]


VectorBasis = Union[XorBasis, PrimeFieldBasis]


def make_basis(codec: DigitCodec, field: Optional[type[galois.FieldArray]] = None) -> VectorBasis:
    """The basis implementation for the codec's field."""
    if codec.q == 2:
        return XorBasis()
    if field is None:
        field = galois.GF(codec.q)
    return PrimeFieldBasis(field, codec)
