"""
Tests for the experiment harness: writers, trend rows, manifests, the ξ
report, the per-kind runs and the command line.
"""

import csv
import json

import pytest
from pydantic import ValidationError

from app.main import build_parser, main
from src.colouring import find_c0_and_build_B
from src.errors import (
    ConfigError,
    DomainError,
    InvariantViolation,
    PreconditionError,
    ResourceCapExceeded,
)
from src.harness import (
    EXIT_CONFIG,
    EXIT_INVARIANT,
    EXIT_OK,
    EXIT_RESOURCE,
    MANIFEST_NAME,
    XiReportRow,
    apply_overrides,
    check_xi_report,
    exit_code_for,
    file_sha256,
    load_spec,
    non_monotone_segments,
    run,
    spec_from_data,
    trend_rows,
    write_csv,
    write_json,
)
from src.harness.writers import to_csv_text
from src.models.experiment import Estimate, ExperimentKind, ExperimentSpec, SamplerConfig
from src.models.structure import Vocabulary
from src.structures import dump_structure
from tests.conftest import coloured


def make_spec(kind: str, **kwargs) -> ExperimentSpec:
    sampler = {"seed": 11, "samples": 20}
    sampler.update(kwargs.pop("sampler", {}))
    return ExperimentSpec.model_validate({"kind": kind, "sampler": sampler, **kwargs})


def read_csv(path):
    with path.open(encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def est(event: str, n: int, p: float) -> Estimate:
    return Estimate(event=event, n=n, estimate=p, ci_low=p, ci_high=p, samples=10, successes=int(p * 10), seed=1)


class TestWriters:
    """Atomic, deterministic report files."""

    def test_json_is_sorted_with_trailing_newline(self, tmp_path):
        """Keys are sorted and the digest matches the file."""
        path = tmp_path / "out" / "a.json"
        digest = write_json(path, {"b": 1, "a": [1, 2]})
        text = path.read_text(encoding="utf-8")
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("}\n")
        assert digest == file_sha256(path)

    def test_no_temporary_files_left(self, tmp_path):
        """Only the target file remains after a write."""
        write_csv(tmp_path / "r.csv", ["x"], [{"x": 1}])
        assert [p.name for p in tmp_path.iterdir()] == ["r.csv"]

    def test_csv_cells(self):
        """None is empty, booleans are lowercase, floats are rounded."""
        text = to_csv_text(["a", "b", "c", "d"], [{"a": None, "b": True, "c": 0.1 + 0.2, "d": 3}])
        assert text == "a,b,c,d\n,true,0.3,3\n"

    def test_rewrite_is_byte_identical(self, tmp_path):
        """Writing the same rows twice gives the same digest."""
        rows = [{"n": 2, "v": 0.5}, {"n": 3, "v": 0.25}]
        first = write_csv(tmp_path / "a.csv", ["n", "v"], rows)
        second = write_csv(tmp_path / "a.csv", ["n", "v"], rows)
        assert first == second


class TestTrend:
    """Deltas and non-monotone flags."""

    def test_flags_against_overall_direction(self):
        """A drop inside a rising series is flagged."""
        rows = trend_rows([est("e", 2, 0.1), est("e", 3, 0.3), est("e", 4, 0.2), est("e", 5, 0.5)], "h")
        assert [r["non_monotone"] for r in rows] == [False, False, True, False]
        assert rows[0]["delta"] is None
        assert rows[2]["delta"] == pytest.approx(-0.1)
        assert non_monotone_segments(rows) == [("e", 4)]

    def test_flat_series_never_flagged(self):
        """Equal endpoints have no direction."""
        rows = trend_rows([est("e", 2, 0.5), est("e", 3, 0.7), est("e", 4, 0.5)], "h")
        assert not any(r["non_monotone"] for r in rows)

    def test_grouped_by_event_then_rank(self):
        """Events keep first-seen order; ranks ascend within each."""
        rows = trend_rows([est("b", 3, 0.2), est("a", 2, 0.1), est("b", 2, 0.1)], "h")
        assert [(r["event"], r["n"]) for r in rows] == [("b", 2), ("b", 3), ("a", 2)]
        assert {r["spec_hash"] for r in rows} == {"h"}


class TestManifest:
    """Config loading and run provenance."""

    def test_spec_hash_ignores_output_dir(self):
        """Where results go does not change what they are."""
        a = make_spec("zero-one")
        b = make_spec("zero-one", output_dir="elsewhere")
        assert a.spec_hash() == b.spec_hash()

    def test_tampered_manifest_rejected(self, tmp_path):
        """A manifest whose spec no longer matches its hash is a config error."""
        spec = make_spec("zero-one")
        data = {"spec": spec.model_dump(mode="json"), "spec_hash": "0" * 64}
        with pytest.raises(ConfigError, match="spec_hash"):
            spec_from_data(data)

    def test_invalid_config_is_config_error(self, tmp_path):
        """Schema failures and unreadable files both surface as ConfigError."""
        with pytest.raises(ConfigError):
            spec_from_data({"kind": "zero-one", "sampler": {}})
        with pytest.raises(ConfigError, match="Cannot read"):
            load_spec(tmp_path / "missing.json")

    def test_overrides_revalidate(self):
        """Overrides apply on top of the config and still validate."""
        spec = apply_overrides(make_spec("zero-one"), kind="enumerate", seed=5, colour_rule="tuple", strong=True)
        assert spec.kind == ExperimentKind.ENUMERATE
        assert spec.sampler.seed == 5
        assert spec.sampler.strong
        with pytest.raises(ConfigError):
            apply_overrides(spec, colour_rule="rainbow")

    def test_rerun_from_manifest_is_byte_identical(self, tmp_path):
        """Feeding a manifest back reproduces every data file."""
        spec = make_spec("zero-one", n_min=1, n_max=2)
        first = run(spec, tmp_path / "first")
        assert first.exit_code == EXIT_OK

        again = load_spec(tmp_path / "first" / MANIFEST_NAME)
        assert again.spec_hash() == spec.spec_hash()
        second = run(again, tmp_path / "second")
        assert second.outputs == first.outputs
        for name in first.outputs:
            assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


class TestExitCodes:
    """Failures map to exit codes and still leave a manifest."""

    @pytest.mark.parametrize("error,code", [
        (ConfigError("x"), EXIT_CONFIG),
        (DomainError("x"), EXIT_CONFIG),
        (PreconditionError("x"), EXIT_CONFIG),
        (ResourceCapExceeded("max_enumeration", 10, 20), EXIT_RESOURCE),
        (InvariantViolation("x"), EXIT_INVARIANT),
        (RuntimeError("x"), EXIT_INVARIANT),
    ])
    def test_mapping(self, error, code):
        assert exit_code_for(error) == code

    def test_validation_error_is_config(self):
        """pydantic validation failures count as bad input."""
        with pytest.raises(ValidationError) as info:
            SamplerConfig(seed=-1)
        assert exit_code_for(info.value) == EXIT_CONFIG

    def test_precondition_run(self, tmp_path):
        """Strong l=2 over GF(2) has no ξ: exit 1 with a manifest."""
        result = run(make_spec("ext-axiom", sampler={"strong": True}), tmp_path)
        assert result.exit_code == EXIT_CONFIG
        manifest = read_json(tmp_path / MANIFEST_NAME)
        assert manifest["exit_code"] == EXIT_CONFIG
        assert manifest["outputs"] == {}

    def test_cap_run_writes_partial(self, tmp_path, monkeypatch):
        """A cap hit exits 2 and keeps the partial result."""
        def capped(*args, **kwargs):
            raise ResourceCapExceeded("max_enumeration", 10, 386, partial={"counted": 3})

        monkeypatch.setattr("src.harness.runner.count_coloured", capped)
        result = run(make_spec("enumerate"), tmp_path)
        assert result.exit_code == EXIT_RESOURCE
        assert read_json(tmp_path / "partial.json") == {"counted": 3}
        assert "partial.json" in read_json(tmp_path / MANIFEST_NAME)["outputs"]

    def test_invariant_run_keeps_report(self, tmp_path, monkeypatch):
        """A ξ soundness failure exits 3 after the report is written."""
        row = XiReportRow(
            n=2, index=0, tuples=1, pairs=3, xi_true=1, same_colour=0,
            soundness_violations=1, oracle_checked=1, oracle_agree=0, oracle_violations=1,
        )
        monkeypatch.setattr("src.harness.runner.check_xi_report", lambda *a, **k: [row])
        result = run(make_spec("check-xi", sampler={"strong": True, "l": 3}), tmp_path)
        assert result.exit_code == EXIT_INVARIANT
        assert len(read_csv(tmp_path / "xi_report.csv")) == 1
        assert read_json(tmp_path / "xi_summary.json")["soundness_violations"] == 1


class TestXiReport:
    """ξ never links differently coloured points."""

    def test_strong_ternary_colours(self):
        """Strong 3-colourings of the plane: no soundness or oracle violations."""
        config = SamplerConfig(seed=3, l=3, strong=True, samples=15)
        rows = check_xi_report(config, [2], oracle_pairs=3)
        assert len(rows) == 15
        assert sum(r.soundness_violations for r in rows) == 0
        assert sum(r.oracle_violations for r in rows) == 0
        assert all(r.oracle_agree == r.oracle_checked for r in rows)
        assert any(r.xi_true for r in rows)

    @pytest.mark.slow
    def test_strong_soundness_ranks_three_to_seven(self):
        """500 strong 3-colourable draws per rank 3..7: every ξ-true pair is same-coloured and CSP-confirmed."""
        config = SamplerConfig(seed=31, l=3, strong=True, samples=500)
        rows = check_xi_report(config, range(3, 8), oracle_pairs=1)
        assert len(rows) == 5 * 500
        assert {r.n for r in rows} == {3, 4, 5, 6, 7}
        assert sum(r.soundness_violations for r in rows) == 0
        assert sum(r.oracle_violations for r in rows) == 0
        assert all(r.oracle_checked >= r.xi_true for r in rows)

    def test_weak_cube_witness(self, cube):
        """Weak 2-colourings with the cube witness: no violations."""
        config = SamplerConfig(seed=4, l=2, samples=6)
        witness = find_c0_and_build_B(cube, 2, Vocabulary.binary())
        rows = check_xi_report(config, [2, 3], witness=witness, oracle_pairs=2)
        assert sum(r.soundness_violations for r in rows) == 0
        assert sum(r.oracle_violations for r in rows) == 0

    def test_preconditions(self):
        """Strong mode needs t >= 2; weak mode needs a witness."""
        with pytest.raises(PreconditionError):
            check_xi_report(SamplerConfig(seed=1, strong=True), [2])
        with pytest.raises(PreconditionError, match="witness"):
            check_xi_report(SamplerConfig(seed=1), [2])


class TestRuns:
    """One run per experiment kind."""

    def test_enumerate_table(self, tmp_path):
        """|K_2| in all four modes, each row stamped with seed and hash."""
        spec = make_spec("enumerate")
        result = run(spec, tmp_path)
        assert result.exit_code == EXIT_OK
        rows = read_csv(tmp_path / "k_counts.csv")
        assert [(r["colour_rule"], r["mode"], r["count"]) for r in rows] == [
            ("closure", "ordered", "386"),
            ("closure", "symmetric_irreflexive", "50"),
            ("tuple", "ordered", "98"),
            ("tuple", "symmetric_irreflexive", "26"),
        ]
        assert {r["spec_hash"] for r in rows} == {spec.spec_hash()}
        assert {r["seed"] for r in rows} == {"11"}

        anchor = read_json(tmp_path / "exact_measure.json")["ranks"][0]
        assert anchor["all_one_empty"] == "1/8"
        assert anchor["colouring_atoms"] == 8
        assert anchor["total_probability"] == "1"
        assert anchor["product_form_mismatches"] == 0

    def test_sample_checks(self, tmp_path):
        """Sampler diagnostics are reported for an enumerable rank."""
        spec = make_spec("sample", sampler={"samples": 400, "colour_rule": "tuple", "symmetric_irreflexive": True})
        assert run(spec, tmp_path).exit_code == EXIT_OK
        (row,) = read_csv(tmp_path / "sampler_checks.csv")
        assert row["samples"] == "400"
        assert float(row["total_variation"]) < 0.25
        assert row["colouring_pvalue"] != ""

    def test_zero_one_outputs(self, tmp_path):
        """Estimates appear in the trend CSV and the JSON dump."""
        spec = make_spec("zero-one", n_min=1, n_max=2, events=["relations_nonempty", "true"])
        assert run(spec, tmp_path).exit_code == EXIT_OK
        rows = read_csv(tmp_path / "estimates.csv")
        assert [(r["event"], r["n"]) for r in rows] == [
            ("relations_nonempty", "1"), ("relations_nonempty", "2"), ("true", "1"), ("true", "2"),
        ]
        assert all(r["estimate"] == "1.0" for r in rows if r["event"] == "true")
        assert len(read_json(tmp_path / "estimates.json")["estimates"]) == 4

    def test_unique_colouring_events(self, tmp_path):
        """The run estimates exactly the two colouring events."""
        assert run(make_spec("unique-colouring"), tmp_path).exit_code == EXIT_OK
        events = {r["event"] for r in read_csv(tmp_path / "estimates.csv")}
        assert events == {"unique_colouring", "needs_all_colours"}

    def test_ramsey_min_dim(self, tmp_path):
        """Every 2-colouring of GF(2)^3 has a monochromatic plane; GF(2)^2 does not force one."""
        assert run(make_spec("ramsey-min-dim", n_max=3), tmp_path).exit_code == EXIT_OK
        assert read_json(tmp_path / "ramsey.json")["min_dim"] == 3

    def test_ramsey_needs_linear(self, tmp_path):
        """Other families are rejected as configuration errors."""
        spec = make_spec("ramsey-min-dim", sampler={"kind": "affine"})
        assert run(spec, tmp_path).exit_code == EXIT_CONFIG

    def test_ext_axiom_strong(self, tmp_path):
        """The strong axiom is written and estimated under a fixed label."""
        spec = make_spec("ext-axiom", target_rank=1, sampler={"samples": 5, "l": 3, "strong": True})
        assert run(spec, tmp_path).exit_code == EXIT_OK
        axiom = read_json(tmp_path / "axiom.json")
        assert axiom["size"] > 0
        assert axiom["sexpr"].startswith("(")
        assert not (tmp_path / "weak_witness.json").exists()
        assert {r["event"] for r in read_csv(tmp_path / "estimates.csv")} == {"ext_axiom"}

    def test_validate_reports_violation(self, tmp_path, cube):
        """A bad structure is a finding, not a failure."""
        path = tmp_path / "bad.json"
        path.write_text(dump_structure(coloured(cube, [1] * 7, {"R": [(1, 2)]})), encoding="utf-8")
        spec = make_spec("validate", structure_path=str(path))
        result = run(spec, tmp_path / "out")
        assert result.exit_code == EXIT_OK
        report = read_json(tmp_path / "out" / "validation.json")
        assert report["valid"] is False
        assert report["conditions"] == [4]

    def test_event_log_written(self, tmp_path):
        """Run events go to events.jsonl next to the reports."""
        run(make_spec("ramsey-min-dim", n_max=3), tmp_path)
        lines = (tmp_path / "events.jsonl").read_text(encoding="utf-8").splitlines()
        assert len(lines) >= 3
        assert all(json.loads(line) for line in lines)


class TestCli:
    """The pregeomzol command."""

    def test_every_kind_is_a_subcommand(self):
        """Subcommands mirror the experiment kinds."""
        for kind in ExperimentKind:
            args = build_parser().parse_args([kind.value, "--config", "c.json"])
            assert args.command == kind.value

    def test_run_from_config(self, tmp_path):
        """Flags override the config and the run exits 0."""
        config = tmp_path / "spec.json"
        config.write_text(json.dumps({"kind": "zero-one", "sampler": {"seed": 1, "samples": 5}}), encoding="utf-8")
        out = tmp_path / "out"
        code = main(["ramsey-min-dim", "--config", str(config), "--seed", "9", "--out", str(out)])
        assert code == EXIT_OK
        manifest = read_json(out / MANIFEST_NAME)
        assert manifest["spec"]["kind"] == "ramsey-min-dim"
        assert manifest["seed"] == 9

    def test_bad_config_exits_1(self, tmp_path):
        """A missing config file is a configuration error."""
        assert main(["zero-one", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == EXIT_CONFIG
