"""
Experiment harness: config loading, runs, reports and manifests.
"""

from src.harness.manifest import MANIFEST_NAME, apply_overrides, build_manifest, load_spec, spec_from_data
from src.harness.runner import (
    EXIT_CONFIG,
    EXIT_INVARIANT,
    EXIT_OK,
    EXIT_RESOURCE,
    ExperimentRunner,
    RunResult,
    create_runner,
    exit_code_for,
    run,
)
from src.harness.trend import TREND_FIELDS, non_monotone_segments, trend_rows
from src.harness.writers import file_sha256, write_csv, write_json, write_text_atomic
from src.harness.xi_report import XI_REPORT_FIELDS, XiReportRow, check_structure, check_xi_report

__all__ = [
    # Config and manifests
    "MANIFEST_NAME",
    "apply_overrides",
    "build_manifest",
    "load_spec",
    "spec_from_data",
    # Runs
    "EXIT_OK",
    "EXIT_CONFIG",
    "EXIT_RESOURCE",
    "EXIT_INVARIANT",
    "ExperimentRunner",
    "RunResult",
    "create_runner",
    "exit_code_for",
    "run",
    # Reports
    "TREND_FIELDS",
    "XI_REPORT_FIELDS",
    "XiReportRow",
    "check_structure",
    "check_xi_report",
    "non_monotone_segments",
    "trend_rows",
    # Writers
    "file_sha256",
    "write_csv",
    "write_json",
    "write_text_atomic",
]
