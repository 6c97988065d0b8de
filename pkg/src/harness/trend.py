"""
Trend rows for per-rank estimates.

A series is the estimates of one event ordered by n. Its direction is the
sign of (last - first); a segment whose delta has the opposite sign is
flagged non-monotone. Flags are informational and never fail a run.
"""

from itertools import groupby
from typing import Iterable

from src.models.experiment import Estimate

TREND_FIELDS = [
    "event",
    "n",
    "estimate",
    "ci_low",
    "ci_high",
    "samples",
    "successes",
    "budget_exceeded",
    "delta",
    "non_monotone",
    "seed",
    "spec_hash",
]


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def trend_rows(estimates: Iterable[Estimate], spec_hash: str) -> list[dict]:
    """CSV rows grouped by event (first-seen order), ascending n within each."""
    order: dict[str, int] = {}
    items = list(estimates)
    for est in items:
        order.setdefault(est.event, len(order))
    items.sort(key=lambda e: (order[e.event], e.n))

    rows: list[dict] = []
    for _, group in groupby(items, key=lambda e: e.event):
        series = list(group)
        direction = _sign(series[-1].estimate - series[0].estimate)
        previous = None
        for est in series:
            delta = None if previous is None else est.estimate - previous
            rows.append({
                "event": est.event,
                "n": est.n,
                "estimate": est.estimate,
                "ci_low": est.ci_low,
                "ci_high": est.ci_high,
                "samples": est.samples,
                "successes": est.successes,
                "budget_exceeded": est.budget_exceeded,
                "delta": delta,
                "non_monotone": delta is not None and direction != 0 and _sign(delta) == -direction,
                "seed": est.seed,
                "spec_hash": spec_hash,
            })
            previous = est.estimate
    return rows


def non_monotone_segments(rows: Iterable[dict]) -> list[tuple[str, int]]:
    """(event, n) of every flagged segment end."""
    return [(r["event"], r["n"]) for r in rows if r["non_monotone"]]
