"""
Reducts, closed substructures and substitution.
"""

from typing import Union, overload

import numpy as np

from src.errors import DomainError, PreconditionError
from src.pregeometry import Flat
from src.structures.structure import ColouredStructure, RelStructure


def reduct_dim(m: ColouredStructure, d: int) -> ColouredStructure:
    """
    The d-dimensional reduct: tuples of dimension <= d, colours iff d >= 1.

    reduct_dim(m, rho) is m itself.
    """
    if d < 0:
        raise DomainError(f"Reduct level must be non-negative, got {d}")
    if m.reduct_level is None and d >= m.vocab.rho:
        return m
    level = d if m.reduct_level is None else min(d, m.reduct_level)
    pg = m.pg
    relations = {
        s.name: [t for t in m.base.stored(s.name) if pg.rank_of(t) <= level]
        for s in m.vocab.symbols
    }
    colours = m.point_colours if level >= 1 else np.zeros_like(m.point_colours)
    return ColouredStructure(m.base.with_relations(relations), m.l, colours, level)


def forget_colours(m: ColouredStructure) -> RelStructure:
    return m.base


def _check_closed_inside(s: Union[RelStructure, ColouredStructure], f: Flat) -> None:
    if not f.points <= s.point_set:
        raise PreconditionError(f"Flat with basis {f.basis} leaves the universe")
    if not s.pg.is_closed(f.points):
        raise PreconditionError(f"Point set {sorted(f.points)} is not closed")


@overload
def closed_substructure(s: ColouredStructure, f: Flat) -> ColouredStructure: ...


@overload
def closed_substructure(s: RelStructure, f: Flat) -> RelStructure: ...


def closed_substructure(s, f):
    """
    Restriction to a closed flat.

    Raises:
        PreconditionError: f is not closed or not inside the universe
    """
    _check_closed_inside(s, f)
    flat = s.pg.closure(f.points)
    if isinstance(s, RelStructure):
        return s.restrict(flat)
    colours = np.zeros_like(s.point_colours)
    inside = np.fromiter(flat.points, dtype=np.int64)
    colours[inside] = s.point_colours[inside]
    return ColouredStructure(s.base.restrict(flat), s.l, colours, s.reduct_level)


def substitute(m: ColouredStructure, a: Flat, a_new: ColouredStructure) -> ColouredStructure:
    """
    Replace the closed substructure m↾A by a_new.

    a_new must live on the same pregeometry with universe A and agree with
    m↾A on every closed substructure of smaller dimension. The result N
    satisfies N↾A = a_new and N↾U = m↾U for every other closed U with
    dim(U) <= dim(A).

    Raises:
        PreconditionError: A not closed, or a_new does not agree with m↾A
    """
    _check_closed_inside(m, a)
    pg = m.pg
    a = pg.closure(a.points)
    if a_new.pg is not pg and a_new.pg.spec != pg.spec:
        raise PreconditionError("Replacement lives on a different pregeometry")
    if a_new.point_set != a.points:
        raise PreconditionError("Replacement universe differs from the substituted flat")
    if a_new.l != m.l or a_new.reduct_level is not None or m.reduct_level is not None:
        raise PreconditionError("Substitution needs full structures with equal l")

    k = a.rank
    if k == 0:
        return m

    if k == 1:
        colour = a_new.colour_of_flat(pg.closure(a.points))
        colours = m.point_colours.copy()
        cl0 = pg.empty_closure().points
        members = np.fromiter(a.points - cl0, dtype=np.int64)
        colours[members] = colour
        return ColouredStructure(m.base.with_relations({}), m.l, colours)

    old = closed_substructure(m, a)
    for i in pg.flat_indices_in(a.points):
        rep = pg.one_dim_flats()[i].basis[0]
        if old.colour_of_point(rep) != a_new.colour_of_point(rep):
            raise PreconditionError(
                f"Replacement recolours the flat of point {rep}; it must agree below dimension {k}"
            )
    for s in m.vocab.symbols:
        below_old = {t for t in old.base.stored(s.name) if pg.rank_of(t) < k}
        below_new = {t for t in a_new.base.stored(s.name) if pg.rank_of(t) < k}
        if below_old != below_new:
            raise PreconditionError(
                f"Replacement changes {s.name} below dimension {k}"
            )

    relations: dict[str, list[tuple[int, ...]]] = {}
    for s in m.vocab.symbols:
        kept = []
        for t in m.base.stored(s.name):
            flat = pg.closure(t)
            if flat.rank < k or (flat.rank == k and flat != a):
                kept.append(t)
        kept.extend(t for t in a_new.base.stored(s.name) if pg.rank_of(t) == k)
        relations[s.name] = kept
    return ColouredStructure(m.base.with_relations(relations), m.l, m.point_colours)
