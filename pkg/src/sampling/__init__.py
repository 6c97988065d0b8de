"""
The dimension conditional measure: exact at tiny scale, sampled everywhere.

Import order matters: src.colouring.search imports the rng and sampler
modules directly, so neither of them imports src.colouring.
"""

from src.sampling.diagnostics import colouring_uniformity, inclusion_frequencies, total_variation
from src.sampling.estimator import estimate_at, estimate_probability, wilson_interval
from src.sampling.events import NAMED_EVENTS, EventContext, resolve_event
from src.sampling.exact import colouring_atoms, exact_measure, product_measure
from src.sampling.rng import oracle_rng, sample_rng
from src.sampling.sampler import Sampler, sample_colourable, sample_coloured

__all__ = [
    # Streams and sampling
    "sample_rng",
    "oracle_rng",
    "Sampler",
    "sample_coloured",
    "sample_colourable",
    # Exact measure
    "exact_measure",
    "product_measure",
    "colouring_atoms",
    # Estimation
    "estimate_at",
    "estimate_probability",
    "wilson_interval",
    # Events
    "NAMED_EVENTS",
    "EventContext",
    "resolve_event",
    # Diagnostics
    "colouring_uniformity",
    "inclusion_frequencies",
    "total_variation",
]
