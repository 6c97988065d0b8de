"""Build pregeometries from their serialisable spec."""

from functools import lru_cache

from src.models.pregeometry import PregeometryKind, PregeometrySpec
from src.pregeometry.base import Pregeometry
from src.pregeometry.spaces import AffineSpace, LinearSpace, ProjectiveSpace
from src.pregeometry.trivial import TrivialPregeometry


@lru_cache(maxsize=64)
def build_pregeometry(spec: PregeometrySpec) -> Pregeometry:
    """
    Cached per spec, so repeated sampling at one rank shares closure caches.
    """
    if spec.kind == PregeometryKind.TRIVIAL:
        return TrivialPregeometry(spec.rank)
    assert spec.q is not None
    if spec.kind == PregeometryKind.LINEAR:
        return LinearSpace(spec.q, spec.rank)
    if spec.kind == PregeometryKind.AFFINE:
        return AffineSpace(spec.q, spec.rank)
    return ProjectiveSpace(spec.q, spec.rank)
