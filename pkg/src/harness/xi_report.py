"""
Empirical check of the colour-defining formula ξ.

For every sampled structure and every pair of distinct rank-1 flats the
report compares ξ on their representatives with

  (a) the colouring the sampler drew, and
  (b) the CSP oracle "same colour in every colouring".

Soundness (ξ true ⇒ same colour under (a) and under (b)) holds for every
structure, so any violation is counted and reported. Completeness depends on
extension properties that small ranks lack; it is reported as a rate only.

The oracle is run on every ξ-true pair plus a seeded sample of the other
pairs (`oracle_pairs_per_structure`).
"""

from itertools import combinations
from typing import Iterable, Optional

import structlog
from pydantic import BaseModel, Field

from src.colouring.solver import same_colour_all
from src.colouring.weak_witness import WeakWitness
from src.config import get_settings
from src.errors import PreconditionError
from src.logic.xi import StrongXiOracle, WeakXiOracle
from src.models.experiment import SamplerConfig
from src.pregeometry import capacity_table
from src.sampling.rng import oracle_rng
from src.sampling.sampler import Sampler
from src.structures.structure import ColouredStructure

logger = structlog.get_logger(__name__)


class XiReportRow(BaseModel):
    """Pair counts for one sampled structure."""

    n: int = Field(..., ge=0)
    index: int = Field(..., ge=0)
    tuples: int = Field(..., ge=0)
    pairs: int = Field(..., ge=0, description="Pairs of distinct rank-1 flats")
    xi_true: int = Field(..., ge=0)
    same_colour: int = Field(..., ge=0, description="Pairs equally coloured by the drawn colouring")
    soundness_violations: int = Field(..., ge=0, description="ξ true, drawn colours differ")
    oracle_checked: int = Field(..., ge=0)
    oracle_agree: int = Field(..., ge=0)
    oracle_violations: int = Field(..., ge=0, description="ξ true, CSP oracle false")
    completeness: Optional[float] = Field(
        default=None,
        description="ξ-true share of the equally coloured pairs"
    )


XI_REPORT_FIELDS = list(XiReportRow.model_fields) + ["seed", "spec_hash"]


def _oracle(m: ColouredStructure, l: int, strong: bool, witness: Optional[WeakWitness]):
    if strong or witness is None:
        return StrongXiOracle(m, l)
    return WeakXiOracle(m, witness.structure, witness.b1, witness.b2)


def check_structure(
    m: ColouredStructure,
    config: SamplerConfig,
    n: int,
    index: int,
    witness: Optional[WeakWitness] = None,
    oracle_pairs: int = 20,
) -> XiReportRow:
    pg = m.pg
    flats = pg.one_dim_flats()
    reps = [flats[i].basis[0] for i in m.base.flat_indices]
    colour = {p: m.colour_of_point(p) for p in reps}
    xi = _oracle(m, config.l, config.strong, witness)

    pairs = list(combinations(reps, 2))
    linked = [xi.holds(a, b) for a, b in pairs]
    same = [colour[a] == colour[b] for a, b in pairs]

    to_check = [i for i, hit in enumerate(linked) if hit]
    others = [i for i, hit in enumerate(linked) if not hit]
    if others and oracle_pairs > 0:
        rng = oracle_rng(config.seed, n, index)
        picked = rng.choice(len(others), size=min(oracle_pairs, len(others)), replace=False)
        to_check.extend(others[int(k)] for k in sorted(picked.tolist()))

    agree = violations = 0
    for i in to_check:
        a, b = pairs[i]
        verdict = same_colour_all(m.base, a, b, config.l, config.strong, config.colour_rule)
        agree += int(verdict == linked[i])
        violations += int(linked[i] and not verdict)

    same_count = sum(same)
    hits_on_same = sum(1 for hit, s in zip(linked, same) if hit and s)
    return XiReportRow(
        n=n,
        index=index,
        tuples=m.base.tuple_count,
        pairs=len(pairs),
        xi_true=sum(linked),
        same_colour=same_count,
        soundness_violations=sum(1 for hit, s in zip(linked, same) if hit and not s),
        oracle_checked=len(to_check),
        oracle_agree=agree,
        oracle_violations=violations,
        completeness=hits_on_same / same_count if same_count else None,
    )


def check_xi_report(
    config: SamplerConfig,
    ranks: Iterable[int],
    samples: Optional[int] = None,
    witness: Optional[WeakWitness] = None,
    oracle_pairs: Optional[int] = None,
) -> list[XiReportRow]:
    """
    One row per sampled structure over the given ranks.

    Raises:
        PreconditionError: strong mode with t < 2, or weak mode without a witness B
    """
    if config.strong:
        family = config.pregeometry()
        table = capacity_table(family.kind, family.q, config.l)
        if not table.strong_relations_possible:
            raise PreconditionError(f"t = {table.t} < 2: strong structures carry no relations")
    elif witness is None:
        raise PreconditionError("The weak ξ report needs the witness B")

    per_structure = (
        oracle_pairs if oracle_pairs is not None
        else get_settings().sampling.oracle_pairs_per_structure
    )
    sampler = Sampler(config)
    total = samples if samples is not None else config.samples
    rows: list[XiReportRow] = []
    for n in ranks:
        for index, m in enumerate(sampler.stream(n, total)):
            rows.append(check_structure(m, config, n, index, witness, per_structure))
        level = [r for r in rows if r.n == n]
        logger.info(
            "xi_report_rank_done",
            n=n,
            structures=len(level),
            soundness_violations=sum(r.soundness_violations for r in level),
            oracle_violations=sum(r.oracle_violations for r in level),
        )
    return rows
