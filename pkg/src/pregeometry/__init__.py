"""Finite pregeometries over prime fields."""

from src.pregeometry.base import Flat, Pregeometry
from src.pregeometry.capacity import (
    CapacityTable,
    capacity_table,
    gaussian_binomial,
    intersection_identity_holds,
    t_of,
    t_threshold,
)
from src.pregeometry.factory import build_pregeometry
from src.pregeometry.isomorphism import extend_independent_iso
from src.pregeometry.spaces import AffineSpace, LinearSpace, ProjectiveSpace
from src.pregeometry.trivial import TrivialPregeometry

__all__ = [
    "AffineSpace",
    "CapacityTable",
    "Flat",
    "LinearSpace",
    "Pregeometry",
    "ProjectiveSpace",
    "TrivialPregeometry",
    "build_pregeometry",
    "capacity_table",
    "extend_independent_iso",
    "gaussian_binomial",
    "intersection_identity_holds",
    "t_of",
    "t_threshold",
]
