"""
Experiment Runner

This module ties the packages together and defines one end-to-end flow per
experiment kind:

    enumerate         |K_n| in all four (colour rule, mode) settings, exact measure anchors
    sample            sampler against the exact measure (TV, colouring uniformity, coin rates)
    check-xi          ξ against drawn colours and the CSP oracle
    zero-one          per-rank estimates of the configured events
    unique-colouring  uniquely colourable / all-colours-needed fractions
    ramsey-min-dim    least rank forcing a monochromatic flat
    ext-axiom         per-rank estimates of one extension axiom
    find-u            a structure U with chromatic minimum l, shrunk
    validate          condition report for a structure file

DESIGN DECISION: The runner maps failures to exit codes and always writes a
manifest:
- 0 success
- 1 configuration or domain error (the input was wrong)
- 2 resource cap hit (the input was too big)
- 3 internal invariant failure (always a bug)

Every report row carries the seed and the spec hash, and every step is
logged as a run event.
"""

import time
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np
from pydantic import ValidationError

from src.audit import JsonlEventSink, RunLogger
from src.colouring import find_c0_and_build_B, min_ramsey_dim
from src.colouring.search import find_U, shrink_to_witness
from src.colouring.weak_witness import WeakWitness
from src.config import get_settings
from src.errors import (
    ConfigError,
    DomainError,
    InvariantViolation,
    PreconditionError,
    ResourceCapExceeded,
)
from src.harness.manifest import MANIFEST_NAME, build_manifest
from src.harness.trend import TREND_FIELDS, non_monotone_segments, trend_rows
from src.harness.writers import write_csv, write_json
from src.harness.xi_report import XI_REPORT_FIELDS, check_xi_report
from src.logic import (
    EvalBudget,
    build_extension_axiom,
    build_weak_xi,
    build_xi_strong,
    pretty,
    size,
    to_sexpr,
)
from src.models.experiment import Estimate, ExperimentKind, ExperimentSpec, RunManifest
from src.models.pregeometry import PregeometryKind
from src.models.structure import ColourRule, Vocabulary
from src.pregeometry import build_pregeometry, capacity_table
from src.sampling import (
    Sampler,
    colouring_atoms,
    colouring_uniformity,
    estimate_probability,
    exact_measure,
    inclusion_frequencies,
    product_measure,
    total_variation,
)
from src.structures import (
    ColouredStructure,
    RelStructure,
    admissible_tuples,
    catalog_for,
    count_coloured,
    load_structure,
    structure_to_document,
)
from src.validation import StructureValidator

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RESOURCE = 2
EXIT_INVARIANT = 3

K_COUNT_FIELDS = ["n", "colour_rule", "mode", "strong", "l", "count", "seed", "spec_hash"]
SAMPLER_CHECK_FIELDS = [
    "n",
    "samples",
    "distinct",
    "colouring_pvalue",
    "total_variation",
    "colourings_checked",
    "max_inclusion_deviation",
    "seed",
    "spec_hash",
]

# Colourings with fewer draws than this are left out of the coin-rate check.
MIN_COLOURING_HITS = 100


def exit_code_for(error: Exception) -> int:
    if isinstance(error, ResourceCapExceeded):
        return EXIT_RESOURCE
    if isinstance(error, InvariantViolation):
        return EXIT_INVARIANT
    if isinstance(error, (ConfigError, DomainError, PreconditionError, ValidationError)):
        return EXIT_CONFIG
    return EXIT_INVARIANT


def default_out_dir(spec: ExperimentSpec) -> Path:
    if spec.output_dir:
        return Path(spec.output_dir)
    return get_settings().harness.output_path / f"{spec.kind.value}-{spec.spec_hash()[:12]}"


@dataclass
class RunResult:
    """What a run produced."""

    exit_code: int
    out_dir: Path
    outputs: dict[str, str] = field(default_factory=dict)
    manifest: Optional[RunManifest] = None
    error: Optional[str] = None


class ExperimentRunner:
    """
    Runs one ExperimentSpec into one output directory.

    Flow:
    1. Log run start (spec hash, seed)
    2. Dispatch on the experiment kind; each flow writes its reports
    3. Map any failure to an exit code
    4. Write the manifest (spec, hash, seed, version, wall time, output hashes)
    """

    def __init__(
        self,
        spec: ExperimentSpec,
        out_dir: Optional[Path] = None,
        run_logger: Optional[RunLogger] = None,
        workers: Optional[int] = None,
    ):
        self.spec = spec
        self.out_dir = Path(out_dir) if out_dir is not None else default_out_dir(spec)
        self._log = run_logger or RunLogger(spec.kind.value)
        self._workers = workers
        self._spec_hash = spec.spec_hash()
        self._outputs: dict[str, str] = {}
        self._flows: dict[ExperimentKind, Callable[[], None]] = {
            ExperimentKind.ENUMERATE: self._enumerate,
            ExperimentKind.SAMPLE: self._sample,
            ExperimentKind.CHECK_XI: self._check_xi,
            ExperimentKind.ZERO_ONE: self._zero_one,
            ExperimentKind.UNIQUE_COLOURING: self._unique_colouring,
            ExperimentKind.RAMSEY_MIN_DIM: self._ramsey,
            ExperimentKind.EXT_AXIOM: self._ext_axiom,
            ExperimentKind.FIND_U: self._find_u,
            ExperimentKind.VALIDATE: self._validate,
        }

    @property
    def spec_hash(self) -> str:
        return self._spec_hash

    def run(self) -> RunResult:
        started = datetime.now(timezone.utc)
        clock = time.perf_counter()
        self._log.run_started(self._spec_hash, self.spec.sampler.seed)

        exit_code = EXIT_OK
        message: Optional[str] = None
        try:
            self._flows[self.spec.kind]()
        except Exception as e:
            exit_code = exit_code_for(e)
            message = f"{type(e).__name__}: {e}"
            if isinstance(e, ResourceCapExceeded):
                self._log.cap_hit(e.cap_name, e.limit, e.observed)
                if e.partial:
                    self._emit_json("partial.json", e.partial)
            elif isinstance(e, InvariantViolation):
                self._log.invariant_failed(str(e), e.details)
            else:
                self._log.run_failed(e)
            if exit_code == EXIT_INVARIANT and not isinstance(e, InvariantViolation):
                self._log.invariant_failed(message)

        wall = time.perf_counter() - clock
        manifest = build_manifest(self.spec, started, wall, exit_code, self._outputs)
        write_json(self.out_dir / MANIFEST_NAME, manifest.model_dump(mode="json"))
        self._log.run_finished(exit_code, wall)
        return RunResult(exit_code, self.out_dir, dict(self._outputs), manifest, message)

    # =========================================================================
    # Output helpers
    # =========================================================================

    def _stamp(self, row: dict[str, Any]) -> dict[str, Any]:
        return {**row, "seed": self.spec.sampler.seed, "spec_hash": self._spec_hash}

    def _emit_json(self, name: str, data: Any) -> None:
        digest = write_json(self.out_dir / name, data)
        self._outputs[name] = digest
        self._log.output(name, digest)

    def _emit_csv(self, name: str, fields: list[str], rows: list[dict[str, Any]]) -> None:
        digest = write_csv(self.out_dir / name, fields, rows)
        self._outputs[name] = digest
        self._log.output(name, digest)

    # =========================================================================
    # enumerate
    # =========================================================================

    def _enumerate(self) -> None:
        cfg = self.spec.sampler
        symbols = tuple(cfg.vocabulary)
        rows = []
        for n in self.spec.ranks:
            pg = build_pregeometry(cfg.pregeometry(n))
            for rule in ColourRule:
                for symmetric in (False, True):
                    vocab = Vocabulary(symbols=symbols, symmetric_irreflexive=symmetric)
                    rows.append(self._stamp({
                        "n": n,
                        "colour_rule": rule.value,
                        "mode": "symmetric_irreflexive" if symmetric else "ordered",
                        "strong": cfg.strong,
                        "l": cfg.l,
                        "count": count_coloured(pg, vocab, cfg.l, cfg.strong, rule),
                    }))
            self._log.step("counted", n=n)
        self._emit_csv("k_counts.csv", K_COUNT_FIELDS, rows)
        anchors = [self._exact_anchor(n) for n in self.spec.ranks]
        self._emit_json("exact_measure.json", self._stamp({"ranks": anchors}))

    def _exact_anchor(self, n: int) -> dict[str, Any]:
        cfg = self.spec.sampler
        pg = build_pregeometry(cfg.pregeometry(n))
        vocab = cfg.vocab()
        total = count_coloured(pg, vocab, cfg.l, cfg.strong, cfg.colour_rule)
        limit = get_settings().limits.max_enumeration
        if total > limit:
            return {"n": n, "count": total, "skipped": "max_enumeration"}

        measure = exact_measure(pg, vocab, cfg.l, cfg.strong, cfg.colour_rule)
        catalog = catalog_for(pg, vocab)
        mismatches = sum(
            1 for m, p in measure.items()
            if p != product_measure(m, cfg.strong, cfg.colour_rule, catalog)
        )
        if mismatches:
            self._log.discrepancy(
                "Inductive measure differs from the product form",
                n=n,
                structures=mismatches,
                mode="symmetric_irreflexive" if vocab.symmetric_irreflexive else "ordered",
            )
        atoms = colouring_atoms(measure)
        all_one = ColouredStructure.from_flat_colours(RelStructure(pg, vocab), cfg.l, [1] * pg.flat_count)
        return {
            "n": n,
            "count": len(measure),
            "total_probability": str(sum(measure.values())),
            "colouring_atoms": len(atoms),
            "atom_masses": sorted({str(p) for p in atoms.values()}),
            "all_one_empty": str(measure.get(all_one, 0)),
            "product_form_mismatches": mismatches,
        }

    # =========================================================================
    # sample
    # =========================================================================

    def _sample(self) -> None:
        rows = [self._stamp(self._sampler_checks(n)) for n in self.spec.ranks]
        self._emit_csv("sampler_checks.csv", SAMPLER_CHECK_FIELDS, rows)

    def _sampler_checks(self, n: int) -> dict[str, Any]:
        cfg = self.spec.sampler
        sampler = Sampler(cfg)
        pg = sampler.pregeometry(n)
        samples = list(sampler.stream(n))

        pvalue = None
        if cfg.l ** pg.flat_count * 5 <= len(samples):
            pvalue = colouring_uniformity((m.colouring for m in samples), cfg.l, pg.flat_count)

        tv = None
        if count_coloured(pg, sampler.vocab, cfg.l, cfg.strong, cfg.colour_rule) <= get_settings().limits.max_enumeration:
            exact = exact_measure(pg, sampler.vocab, cfg.l, cfg.strong, cfg.colour_rule)
            tv = total_variation(Counter(samples), exact)

        by_colouring: dict[tuple[int, ...], int] = Counter(m.colouring for m in samples)
        catalog = catalog_for(pg, sampler.vocab)
        checked = 0
        worst = 0.0
        for colouring, hits in sorted(by_colouring.items()):
            if hits < MIN_COLOURING_HITS:
                continue
            expected = admissible_tuples(
                catalog, sampler.vocab, np.array(colouring), cfg.strong, cfg.colour_rule
            )
            if not expected:
                continue
            _, freq = inclusion_frequencies(samples, colouring)
            checked += 1
            worst = max(worst, max(abs(freq.get(t, 0.0) - 0.5) for t in expected))

        self._log.step("sampler_checked", n=n, total_variation=tv, colouring_pvalue=pvalue)
        return {
            "n": n,
            "samples": len(samples),
            "distinct": len(set(samples)),
            "colouring_pvalue": pvalue,
            "total_variation": tv,
            "colourings_checked": checked,
            "max_inclusion_deviation": worst if checked else None,
        }

    # =========================================================================
    # check-xi
    # =========================================================================

    def _weak_witness(self) -> WeakWitness:
        cfg = self.spec.sampler
        ambient = self.spec.ambient_rank or 3
        pg = build_pregeometry(cfg.pregeometry(ambient))
        witness = find_c0_and_build_B(pg, cfg.l, cfg.vocab())
        self._emit_json("weak_witness.json", self._stamp({
            "ambient_rank": ambient,
            "c0": list(witness.c0),
            "b1": witness.b1,
            "b2": witness.b2,
            "colourings_checked": witness.colourings_checked,
            "mono_report": witness.report.model_dump(mode="json"),
            "structure": structure_to_document(witness.structure).model_dump(mode="json", exclude_none=True),
        }))
        return witness

    def _check_xi(self) -> None:
        cfg = self.spec.sampler
        witness = None if cfg.strong else self._weak_witness()
        rows = check_xi_report(cfg, self.spec.ranks, witness=witness)
        self._emit_csv("xi_report.csv", XI_REPORT_FIELDS, [self._stamp(r.model_dump()) for r in rows])

        soundness = sum(r.soundness_violations for r in rows)
        oracle = sum(r.oracle_violations for r in rows)
        rates = [r.completeness for r in rows if r.completeness is not None]
        self._emit_json("xi_summary.json", self._stamp({
            "structures": len(rows),
            "soundness_violations": soundness,
            "oracle_violations": oracle,
            "mean_completeness": sum(rates) / len(rates) if rates else None,
        }))
        if soundness or oracle:
            raise InvariantViolation(
                "ξ linked differently coloured points",
                {"soundness_violations": soundness, "oracle_violations": oracle},
            )

    # =========================================================================
    # Estimates: zero-one, unique-colouring, ext-axiom
    # =========================================================================

    def _estimate(self, events: list[str], labels: Optional[dict[str, str]] = None) -> None:
        cfg = self.spec.sampler
        budget = EvalBudget.from_settings()
        labels = labels or {}
        estimates: list[Estimate] = []
        for event in events:
            for est in estimate_probability(cfg, event, self.spec.ranks, workers=self._workers, budget=budget):
                if event in labels:
                    est = est.model_copy(update={"event": labels[event]})
                self._log.estimate(est.event, est.n, est.estimate)
                estimates.append(est)

        rows = trend_rows(estimates, self._spec_hash)
        for event, n in non_monotone_segments(rows):
            self._log.discrepancy("Non-monotone segment", event=event, n=n)
        self._emit_csv("estimates.csv", TREND_FIELDS, rows)
        self._emit_json(
            "estimates.json",
            self._stamp({"estimates": [e.model_dump(mode="json") for e in estimates]}),
        )

    def _zero_one(self) -> None:
        self._estimate(list(self.spec.events))

    def _unique_colouring(self) -> None:
        self._estimate(["unique_colouring", "needs_all_colours"])

    def _ext_axiom(self) -> None:
        cfg = self.spec.sampler
        vocab = cfg.vocab()
        if cfg.strong:
            family = cfg.pregeometry()
            table = capacity_table(family.kind, family.q, cfg.l)
            if not table.strong_relations_possible:
                raise PreconditionError(f"t = {table.t} < 2: ξ is undefined for strong {cfg.l}-colourings")
            symbol = vocab.minimal_symbol
            xi = build_xi_strong(cfg.l, symbol.arity, symbol.name)
        else:
            witness = self._weak_witness()
            _, xi = build_weak_xi(witness.structure, witness.b1, witness.b2)

        b = RelStructure(build_pregeometry(cfg.pregeometry(self.spec.target_rank)), vocab)
        axiom = build_extension_axiom(b, b.pg.empty_closure(), cfg.l, xi, cfg.strong, cfg.colour_rule)
        text = to_sexpr(axiom)
        self._emit_json("axiom.json", self._stamp({
            "b_rank": self.spec.target_rank,
            "a_rank": 0,
            "size": size(axiom),
            "sexpr": text,
            "pretty": pretty(axiom),
        }))
        self._estimate([text], {text: "ext_axiom"})

    # =========================================================================
    # ramsey-min-dim, find-u, validate
    # =========================================================================

    def _ramsey(self) -> None:
        cfg = self.spec.sampler
        if cfg.kind != PregeometryKind.LINEAR or cfg.q is None:
            raise ConfigError("ramsey-min-dim runs over linear spaces only")
        result = min_ramsey_dim(
            cfg.q,
            self.spec.ramsey_colours or cfg.l,
            self.spec.target_rank,
            n_max=self.spec.n_max or 4,
        )
        self._emit_json("ramsey.json", self._stamp(result.model_dump(mode="json")))

    def _find_u(self) -> None:
        cfg = self.spec.sampler
        u = find_U(
            cfg.pregeometry(),
            cfg.l,
            cfg.vocab(),
            cfg.strong,
            budget=self.spec.search_budget,
            seed=cfg.seed,
            ranks=self.spec.ranks,
            colour_rule=cfg.colour_rule,
        )
        if u is None:
            self._emit_json("find_u.json", self._stamp({"found": False, "ranks": self.spec.ranks}))
            return
        witness = shrink_to_witness(u, cfg.l, cfg.strong, cfg.colour_rule)
        self._emit_json("find_u.json", self._stamp({
            "found": True,
            "rank": u.rank,
            "tuples": u.tuple_count,
            "witness_rank": witness.rank,
            "witness_tuples": witness.tuple_count,
            "u": structure_to_document(u).model_dump(mode="json", exclude_none=True),
            "witness": structure_to_document(witness).model_dump(mode="json", exclude_none=True),
        }))

    def _validate(self) -> None:
        cfg = self.spec.sampler
        m = load_structure(self.spec.structure_path or "")
        if not isinstance(m, ColouredStructure):
            raise PreconditionError("validate needs a structure document with colours")
        report = StructureValidator(cfg.strong, cfg.colour_rule).validate(m)
        self._emit_json("validation.json", self._stamp({
            "valid": report.is_valid,
            "conditions": report.conditions,
            "violations": [v.model_dump(mode="json") for v in report.violations],
        }))


def create_runner(
    spec: ExperimentSpec,
    out_dir: Optional[Path] = None,
    workers: Optional[int] = None,
) -> ExperimentRunner:
    """
    Factory wiring a runner with the run event log.

    events.jsonl goes next to the reports unless the harness settings
    disable it.
    """
    target = Path(out_dir) if out_dir is not None else default_out_dir(spec)
    sink = JsonlEventSink(target / "events.jsonl") if get_settings().harness.write_event_log else None
    return ExperimentRunner(spec, target, RunLogger(spec.kind.value, sink), workers)


def run(spec: ExperimentSpec, out_dir: Optional[Path] = None, workers: Optional[int] = None) -> RunResult:
    """Run one experiment: report files, manifest and exit code."""
    return create_runner(spec, out_dir, workers).run()
