"""
Relational and coloured structures over pregeometries.

The witness builder lives in src.structures.witness and is imported from
there (it depends on src.validation, which depends on this package).
"""

from src.structures.catalog import (
    TupleCatalog,
    TupleGroup,
    admissible_count,
    admissible_tuples,
    catalog_for,
)
from src.structures.document import (
    dump_structure,
    load_structure,
    structure_from_document,
    structure_to_document,
)
from src.structures.embeddings import (
    ExtensionPair,
    build_extension_catalog,
    find_embeddings,
    has_extension_property,
    is_isomorphic,
    iso_representatives,
    k_extension_property,
)
from src.structures.enumerate import count_coloured, enumerate_coloured, iter_flat_colourings
from src.structures.operations import closed_substructure, forget_colours, reduct_dim, substitute
from src.structures.structure import AnyStructure, ColouredStructure, RelStructure, relational_part

__all__ = [
    # Structures
    "AnyStructure",
    "ColouredStructure",
    "RelStructure",
    "relational_part",
    # Operations
    "closed_substructure",
    "forget_colours",
    "reduct_dim",
    "substitute",
    # Catalog and enumeration
    "TupleCatalog",
    "TupleGroup",
    "admissible_count",
    "admissible_tuples",
    "catalog_for",
    "count_coloured",
    "enumerate_coloured",
    "iter_flat_colourings",
    # Embeddings
    "ExtensionPair",
    "build_extension_catalog",
    "find_embeddings",
    "has_extension_property",
    "is_isomorphic",
    "iso_representatives",
    "k_extension_property",
    # Documents
    "dump_structure",
    "load_structure",
    "structure_from_document",
    "structure_to_document",
]
