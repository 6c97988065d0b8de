"""
Colouring constraint solving over rank-1 flats.

find_U and shrink_to_witness live in src.colouring.search and are imported
from there (they sample through src.sampling, which uses this package).
"""

from src.colouring.csp import ColourCSP, ConstraintKind, FlatConstraint, build_csp
from src.colouring.monochromatic import (
    canonical_colourings,
    maximal_mono_flats,
    min_ramsey_dim,
    monochromatic_flats,
    sweep_colourings,
)
from src.colouring.solver import (
    ColouringSolver,
    chromatic_min,
    count_colourings_up_to_perm,
    find_colouring,
    iter_colourings,
    needs_all_colours,
    same_colour_all,
    same_colour_classes,
    solve_csp,
)
from src.colouring.weak_witness import WeakWitness, find_c0_and_build_B

__all__ = [
    # CSP
    "ColourCSP",
    "ConstraintKind",
    "FlatConstraint",
    "build_csp",
    # Solver
    "ColouringSolver",
    "chromatic_min",
    "count_colourings_up_to_perm",
    "find_colouring",
    "iter_colourings",
    "needs_all_colours",
    "same_colour_all",
    "same_colour_classes",
    "solve_csp",
    # Monochromatic flats
    "canonical_colourings",
    "maximal_mono_flats",
    "min_ramsey_dim",
    "monochromatic_flats",
    "sweep_colourings",
    # Weak witness
    "WeakWitness",
    "find_c0_and_build_B",
]
