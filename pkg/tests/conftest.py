"""Shared fixtures."""

import pytest

from src.models.pregeometry import PregeometryKind, PregeometrySpec
from src.models.structure import Vocabulary
from src.pregeometry import build_pregeometry
from src.structures import ColouredStructure, RelStructure


def linear(q: int, rank: int):
    return build_pregeometry(PregeometrySpec(kind=PregeometryKind.LINEAR, q=q, rank=rank))


def affine(q: int, rank: int):
    return build_pregeometry(PregeometrySpec(kind=PregeometryKind.AFFINE, q=q, rank=rank))


def projective(q: int, rank: int):
    return build_pregeometry(PregeometrySpec(kind=PregeometryKind.PROJECTIVE, q=q, rank=rank))


def trivial(size: int):
    return build_pregeometry(PregeometrySpec(kind=PregeometryKind.TRIVIAL, rank=size))


@pytest.fixture
def plane():
    """GF(2)^2: points 0..3, rank-1 flats {0,1}, {0,2}, {0,3}."""
    return linear(2, 2)


@pytest.fixture
def cube():
    """GF(2)^3."""
    return linear(2, 3)


@pytest.fixture
def binary_vocab():
    return Vocabulary.binary()


@pytest.fixture
def symmetric_vocab():
    return Vocabulary.binary(symmetric_irreflexive=True)


def coloured(pg, flat_colours, relations=None, l=2, vocab=None):
    """A ColouredStructure from flat colours (pg flat order) and relation tuples."""
    base = RelStructure(pg, vocab or Vocabulary.binary(), relations or {})
    return ColouredStructure.from_flat_colours(base, l, flat_colours)
