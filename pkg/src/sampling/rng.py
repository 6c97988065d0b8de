"""
Random streams.

Every sample gets its own counter-based Philox stream keyed by
(run seed, rank n, sample index), so a sample does not depend on which
worker drew it or on how many samples came before.
"""

import numpy as np


def sample_rng(seed: int, n: int, index: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(n, index))
    return np.random.Generator(np.random.Philox(sequence))


def oracle_rng(seed: int, n: int, index: int) -> np.random.Generator:
    """A second stream per sample, for choices made while checking it."""
    sequence = np.random.SeedSequence(seed, spawn_key=(n, index, 1))
    return np.random.Generator(np.random.Philox(sequence))
