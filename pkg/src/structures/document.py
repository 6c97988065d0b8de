"""
JSON structure documents.

Colours are written per rank-1 flat, keyed by the flat's canonical basis;
relations list the stored tuples (orbit representatives in symmetric mode).
Reading a document back gives an equal structure.
"""

import json
from pathlib import Path
from typing import Union

import numpy as np

from src.errors import ConfigError, DomainError
from src.models.structure import ColourEntry, StructureDocument
from src.pregeometry import build_pregeometry
from src.structures.structure import AnyStructure, ColouredStructure, RelStructure


def structure_to_document(s: AnyStructure) -> StructureDocument:
    base = s.base if isinstance(s, ColouredStructure) else s
    pg = base.pg
    colours = None
    l = None
    reduct_level = None
    if isinstance(s, ColouredStructure):
        l = s.l
        reduct_level = s.reduct_level
        flats = pg.one_dim_flats()
        colours = [
            ColourEntry(basis=list(flats[i].basis), colour=s.colouring[i])
            for i in base.flat_indices
            if s.colouring[i] > 0
        ]
    return StructureDocument(
        kind=pg.kind,
        q=pg.q,
        rank=pg.rank,
        l=l,
        reduct_level=reduct_level,
        universe_basis=None if base.is_whole() else list(base.universe.basis),  # type: ignore[union-attr]
        mode="symmetric_irreflexive" if base.vocab.symmetric_irreflexive else "ordered",
        vocabulary=list(base.vocab.symbols),
        colours=colours,
        relations={
            sym.name: [list(t) for t in sorted(base.stored(sym.name))]
            for sym in base.vocab.symbols
        },
    )


def structure_from_document(doc: StructureDocument) -> AnyStructure:
    """
    Rebuild a structure.

    Raises:
        DomainError: a colour entry is not a rank-1 flat, or two entries
            colour the same flat differently
    """
    pg = build_pregeometry(doc.pregeometry)
    universe = pg.closure(doc.universe_basis) if doc.universe_basis is not None else None
    base = RelStructure(pg, doc.vocab, doc.relations, universe)
    if doc.l is None:
        return base

    cl0 = pg.empty_closure().points
    colours = np.zeros(pg.universe_size, dtype=np.int16)
    for entry in doc.colours or []:
        flat = pg.closure(entry.basis)
        if flat.rank != 1:
            raise DomainError(f"Colour entry {entry.basis} spans rank {flat.rank}, not 1")
        members = np.fromiter(flat.points - cl0, dtype=np.int64)
        previous = set(int(c) for c in colours[members]) - {0}
        if previous and previous != {entry.colour}:
            raise DomainError(f"Flat {flat.basis} coloured both {sorted(previous)} and {entry.colour}")
        colours[members] = entry.colour
    return ColouredStructure(base, doc.l, colours, doc.reduct_level)


def load_structure(path: Union[str, Path]) -> AnyStructure:
    """
    Raises:
        ConfigError: unreadable or malformed file
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot read structure file {path}: {e}") from e
    return structure_from_document(StructureDocument.model_validate(raw))


def dump_structure(s: AnyStructure) -> str:
    """Canonical JSON text (sorted keys)."""
    data = structure_to_document(s).model_dump(mode="json", exclude_none=True)
    return json.dumps(data, sort_keys=True, indent=2)
