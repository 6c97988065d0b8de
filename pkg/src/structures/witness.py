"""
Witness structure for the strong colour-defining formula.

Given a, b of one colour, the builder lays out an independent set

    S = {a, b} ∪ {v_2..v_l} ∪ fillers

where every R_1-pattern (a, v_i), (b, v_i) and (v_k, v_i) with k > i gets
t - 2 private fillers u, and colours B = cl(S) in five steps:

    1. cl(v_i) gets colour i (a and b keep the designated colour)
    2. each cl(a, v_i, u..) is finished with pairwise distinct colours
    3. the same for each cl(b, v_i, u..)
    4. the same for each cl(v_k, v_i, u..)
    5. every flat still uncoloured gets the designated colour

The spaces of steps 2-4 pairwise meet in a single rank-1 flat, so no flat is
coloured twice. R_1 holds exactly on one tuple per pattern, padded to the
arity with points of the pattern's space.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import structlog

from src.config import get_settings
from src.errors import InvariantViolation, PreconditionError, ResourceCapExceeded
from src.models.pregeometry import PregeometrySpec
from src.models.structure import Vocabulary
from src.pregeometry import Pregeometry, build_pregeometry, capacity_table, intersection_identity_holds
from src.structures.structure import ColouredStructure, RelStructure
from src.validation import validate

logger = structlog.get_logger(__name__)


@dataclass
class WitnessB:
    """The built structure and where its named points sit."""

    structure: ColouredStructure
    a: int
    b: int
    vs: list[int]
    patterns: dict[str, tuple[int, ...]] = field(default_factory=dict)
    t: int = 2

    @property
    def rank(self) -> int:
        return self.structure.rank


def witness_rank(l: int, t: int) -> int:
    """|S| for the given l and t."""
    patterns = 2 * (l - 1) + (l - 1) * (l - 2) // 2
    return 2 + (l - 1) + (t - 2) * patterns


def _pad(
    pg: Pregeometry,
    head: tuple[int, int],
    space_basis: tuple[int, ...],
    arity: int,
    distinct: bool,
) -> tuple[int, ...]:
    """head followed by arity - 2 entries from cl(space_basis)."""
    if arity == 2:
        return head
    cl0 = pg.empty_closure().points
    pool = [p for p in space_basis if p not in head]
    pool += [p for p in sorted(pg.closure(space_basis).points - cl0) if p not in head and p not in pool]
    need = arity - 2
    if len(pool) >= need:
        return head + tuple(pool[:need])
    if distinct:
        raise PreconditionError(
            f"Closure of {space_basis} has too few points for {arity} distinct entries"
        )
    fill = (pool + [head[0]] * need)[:need]
    return head + tuple(fill)


def build_witness_B_strong(
    family: PregeometrySpec,
    l: int,
    vocab: Optional[Vocabulary] = None,
    colour_of_ab: int = 1,
) -> WitnessB:
    """
    Build the strongly l-coloured witness B for a pair of equally coloured
    independent points.

    The relation symbol used is the vocabulary's first symbol of minimal
    arity; every other symbol is empty.

    Raises:
        PreconditionError: t < 2 for the family, or the family cannot host S
        InvariantViolation: the built structure fails validation
    """
    vocab = vocab or Vocabulary.binary()
    if not 1 <= colour_of_ab <= l:
        raise PreconditionError(f"Designated colour {colour_of_ab} outside 1..{l}")
    table = capacity_table(family.kind, family.q, l)
    t = table.t
    if t < 2:
        raise PreconditionError(
            f"t = {t} < 2 for {family.kind.value} q={family.q}, l={l}: strong relations are impossible"
        )
    n = witness_rank(l, t)
    if n > 32:
        raise PreconditionError(f"Witness needs rank {n}, beyond the supported range")
    spec = family.with_rank(n)
    cells = get_settings().limits.max_memory_cells
    if spec.universe_size > cells:
        raise ResourceCapExceeded("max_memory_cells", cells, observed=spec.universe_size)
    pg = build_pregeometry(spec)

    basis = list(pg.basis_of(pg.universe))
    if len(basis) != n:
        raise InvariantViolation("Greedy basis has the wrong size", {"expected": n, "got": len(basis)})
    a, b = basis[0], basis[1]
    vs = basis[2:2 + (l - 1)]
    fillers = iter(basis[2 + (l - 1):])

    def take() -> tuple[int, ...]:
        return tuple(next(fillers) for _ in range(t - 2))

    # (head, space basis) per pattern, keyed for reporting
    spaces: dict[str, tuple[tuple[int, int], tuple[int, ...]]] = {}
    for i, v in enumerate(vs, start=2):
        spaces[f"a,{i}"] = ((a, v), (a, v) + take())
    for i, v in enumerate(vs, start=2):
        spaces[f"b,{i}"] = ((b, v), (b, v) + take())
    for i, v in enumerate(vs, start=2):
        for k in range(i + 1, l + 1):
            spaces[f"{k},{i}"] = ((vs[k - 2], v), (vs[k - 2], v) + take())

    # colours: step 1 then steps 2-4 then step 5
    others = [c for c in range(1, l + 1) if c != colour_of_ab]
    flats = pg.one_dim_flats()
    flat_colours = np.zeros(pg.flat_count, dtype=np.int64)
    flat_colours[pg.flat_index_of_point(a)] = colour_of_ab
    flat_colours[pg.flat_index_of_point(b)] = colour_of_ab
    for v, c in zip(vs, others):
        flat_colours[pg.flat_index_of_point(v)] = c
    for _, space_basis in spaces.values():
        inside = pg.flat_indices_in(pg.closure(space_basis).points)
        used = {int(flat_colours[i]) for i in inside if flat_colours[i]}
        free = iter(c for c in range(1, l + 1) if c not in used)
        for i in inside:
            if flat_colours[i] == 0:
                flat_colours[i] = next(free)
    flat_colours[flat_colours == 0] = colour_of_ab

    arity = vocab.minimal_symbol.arity
    distinct = vocab.symmetric_irreflexive
    patterns = {
        key: _pad(pg, head, space_basis, arity, distinct)
        for key, (head, space_basis) in spaces.items()
    }
    base = RelStructure(pg, vocab, {vocab.minimal_symbol.name: list(patterns.values())})
    structure = ColouredStructure.from_flat_colours(base, l, flat_colours)

    violations = validate(structure, strong=True)
    if violations:
        raise InvariantViolation(
            "Witness structure is not strongly coloured",
            {"violations": [v.model_dump() for v in violations[:5]]},
        )
    if not intersection_identity_holds(pg, vs[0], (a,), (b,)):
        raise InvariantViolation("Closure intersection identity failed on the witness basis")
    logger.info(
        "witness_built",
        pregeometry=spec.label(),
        l=l,
        t=t,
        tuples=len(patterns),
        flats=len(flats),
    )
    return WitnessB(structure=structure, a=a, b=b, vs=list(vs), patterns=patterns, t=t)
