"""Closure isomorphisms induced by independent tuples."""

from src.errors import InvariantViolation, PreconditionError
from src.pregeometry.base import Pregeometry


def extend_independent_iso(
    pg_src: Pregeometry,
    src_tuple: tuple[int, ...],
    pg_dst: Pregeometry,
    dst_tuple: tuple[int, ...],
) -> dict[int, int]:
    """
    Extend src_i -> dst_i to a bijection cl(src) -> cl(dst) that commutes
    with closure.

    Points are matched through their coefficients over the tuple, so
    closure(∅) maps onto closure(∅).

    Raises:
        PreconditionError: length mismatch, different families, or a
            dependent tuple
    """
    src_tuple = tuple(src_tuple)
    dst_tuple = tuple(dst_tuple)
    if len(src_tuple) != len(dst_tuple):
        raise PreconditionError(
            f"Tuples differ in length: {len(src_tuple)} vs {len(dst_tuple)}"
        )
    if pg_src.kind != pg_dst.kind or pg_src.q != pg_dst.q:
        raise PreconditionError(
            f"Cannot map {pg_src.spec.label()} onto {pg_dst.spec.label()}"
        )
    if not pg_src.is_independent(src_tuple):
        raise PreconditionError(f"Source tuple {src_tuple} is dependent")
    if not pg_dst.is_independent(dst_tuple):
        raise PreconditionError(f"Target tuple {dst_tuple} is dependent")

    targets = dict(pg_dst.parametrize(dst_tuple))
    mapping: dict[int, int] = {}
    for coeffs, p in pg_src.parametrize(src_tuple):
        image = targets[coeffs]
        if mapping.setdefault(p, image) != image:
            raise InvariantViolation(
                "Coefficient map is not well defined",
                {"point": p, "images": [mapping[p], image]},
            )
    if len(set(mapping.values())) != len(mapping):
        raise InvariantViolation("Coefficient map is not injective", {"size": len(mapping)})
    return mapping
