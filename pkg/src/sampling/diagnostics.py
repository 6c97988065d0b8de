"""
Sampler-versus-oracle diagnostics used by the `sample` experiment.
"""

from collections import Counter
from fractions import Fraction
from itertools import product
from typing import Hashable, Iterable, Mapping, Union

import numpy as np
from scipy import stats

from src.errors import PreconditionError
from src.structures.structure import ColouredStructure


def total_variation(
    empirical: Mapping[Hashable, int],
    exact: Mapping[Hashable, Union[Fraction, float]],
) -> float:
    """½ Σ |count/N - p| over the union of supports."""
    total = sum(empirical.values())
    if total == 0:
        raise PreconditionError("No samples")
    keys = set(empirical) | set(exact)
    return 0.5 * sum(
        abs(empirical.get(k, 0) / total - float(exact.get(k, 0)))
        for k in keys
    )


def colouring_uniformity(colourings: Iterable[tuple[int, ...]], l: int, flat_count: int) -> float:
    """Chi-square p-value of the colouring counts against the uniform law on l^flat_count cells."""
    counts = Counter(colourings)
    cells = [counts.get(c, 0) for c in product(range(1, l + 1), repeat=flat_count)]
    result = stats.chisquare(np.array(cells, dtype=float))
    return float(result.pvalue)


def inclusion_frequencies(
    samples: Iterable[ColouredStructure],
    colouring: tuple[int, ...],
) -> tuple[int, dict[tuple[str, tuple[int, ...]], float]]:
    """
    Among samples with the given colouring: how many there were, and how
    often each stored tuple appeared.
    """
    hits = 0
    seen: Counter[tuple[str, tuple[int, ...]]] = Counter()
    for m in samples:
        if m.colouring != colouring:
            continue
        hits += 1
        seen.update(m.all_tuples())
    return hits, {k: v / hits for k, v in seen.items()} if hits else {}
