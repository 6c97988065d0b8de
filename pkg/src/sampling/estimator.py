"""
Monte Carlo estimation of event probabilities under δ_n.

DESIGN DECISION: Batches are independent of the worker layout.
Sample i at rank n always comes from the stream (seed, n, i); a batch is a
half-open index range, and aggregation only adds counts. One worker and
sixteen workers therefore produce the same Estimate rows.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

import structlog
from scipy import stats

from src.config import get_settings
from src.logic.evaluator import BudgetExceeded, EvalBudget
from src.models.experiment import Estimate, SamplerConfig
from src.sampling.events import EventContext, resolve_event
from src.sampling.sampler import Sampler

logger = structlog.get_logger(__name__)


def wilson_interval(successes: int, trials: int, confidence: Optional[float] = None) -> tuple[float, float]:
    """Wilson score interval; (0, 1) when there are no trials."""
    if trials == 0:
        return 0.0, 1.0
    level = confidence if confidence is not None else get_settings().sampling.confidence_level
    ci = stats.binomtest(successes, trials).proportion_ci(confidence_level=level, method="wilson")
    p = successes / trials
    return max(0.0, min(float(ci.low), p)), min(1.0, max(float(ci.high), p))


@dataclass
class BatchCounts:
    successes: int = 0
    verdicts: int = 0
    budget_exceeded: int = 0

    def add(self, other: 'BatchCounts') -> None:
        self.successes += other.successes
        self.verdicts += other.verdicts
        self.budget_exceeded += other.budget_exceeded


# =============================================================================
# MULTIPROCESSING WORKER (module-level for pickling)
# =============================================================================

def _run_batch(args: tuple[dict, str, int, int, int, Optional[EvalBudget]]) -> BatchCounts:
    config_data, event, n, start, stop, budget = args
    config = SamplerConfig.model_validate(config_data)
    ctx = EventContext(config.l, config.strong, config.colour_rule, budget)
    decide = resolve_event(event, ctx)
    sampler = Sampler(config)
    counts = BatchCounts()
    for m in sampler.stream(n, stop - start, start):
        verdict = decide(m)
        if isinstance(verdict, BudgetExceeded):
            counts.budget_exceeded += 1
            continue
        counts.verdicts += 1
        counts.successes += int(verdict)
    return counts


def _batches(samples: int, workers: int) -> list[tuple[int, int]]:
    chunks = max(1, min(samples, workers * 4))
    size, extra = divmod(samples, chunks)
    out, start = [], 0
    for i in range(chunks):
        stop = start + size + (1 if i < extra else 0)
        if stop > start:
            out.append((start, stop))
        start = stop
    return out


def estimate_at(
    config: SamplerConfig,
    event: str,
    n: int,
    samples: Optional[int] = None,
    workers: Optional[int] = None,
    budget: Optional[EvalBudget] = None,
) -> Estimate:
    """
    One Estimate row for `event` at rank n.

    Raises:
        ConfigError: the event cannot be resolved
    """
    total = samples if samples is not None else config.samples
    pool_size = workers if workers is not None else get_settings().sampling.workers
    # raises ConfigError here rather than inside a worker
    resolve_event(event, EventContext(config.l, config.strong, config.colour_rule, budget))
    data = config.model_dump(mode="json")
    jobs = [(data, event, n, start, stop, budget) for start, stop in _batches(total, pool_size)]

    counts = BatchCounts()
    if pool_size <= 1:
        for job in jobs:
            counts.add(_run_batch(job))
    else:
        with ProcessPoolExecutor(max_workers=pool_size) as executor:
            for result in executor.map(_run_batch, jobs):
                counts.add(result)

    p = counts.successes / counts.verdicts if counts.verdicts else 0.0
    low, high = wilson_interval(counts.successes, counts.verdicts)
    logger.info(
        "sample_batch_done",
        event_name=event,
        n=n,
        samples=total,
        successes=counts.successes,
        budget_exceeded=counts.budget_exceeded,
    )
    return Estimate(
        event=event,
        n=n,
        estimate=p,
        ci_low=low,
        ci_high=high,
        samples=counts.verdicts,
        successes=counts.successes,
        budget_exceeded=counts.budget_exceeded,
        seed=config.seed,
    )


def estimate_probability(
    config: SamplerConfig,
    event: str,
    ranks: Iterable[int],
    samples: Optional[int] = None,
    workers: Optional[int] = None,
    budget: Optional[EvalBudget] = None,
) -> list[Estimate]:
    """Per-rank Monte Carlo estimates of one event, deterministic under the seed."""
    return [estimate_at(config, event, n, samples, workers, budget) for n in ranks]
