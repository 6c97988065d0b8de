"""
pregeomzol command line

Every subcommand runs one experiment kind from a JSON config:

    pregeomzol zero-one --config runs/zero_one.json --seed 7 --out runs/z7

The config is an ExperimentSpec, or the manifest.json of an earlier run
(which reproduces that run). Command-line flags override the config; the
subcommand always wins over the config's "kind".

Exit codes:
    0  success
    1  configuration or domain error
    2  resource cap exceeded
    3  internal invariant failure
"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

# Add project root to Python path so 'src' module can be found
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import structlog

from src import __version__
from src.audit import configure_logging
from src.config import get_settings
from src.harness import EXIT_CONFIG, EXIT_INVARIANT, apply_overrides, load_spec, run
from src.models.experiment import ExperimentKind

logger = structlog.get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pregeomzol",
        description="Random l-colourable structures over finite pregeometries",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    for kind in ExperimentKind:
        sub = commands.add_parser(kind.value, help=f"run a {kind.value} experiment")
        sub.add_argument("--config", required=True, type=Path, help="ExperimentSpec or manifest JSON")
        sub.add_argument("--seed", type=int, default=None, help="override sampler.seed")
        sub.add_argument("--out", type=Path, default=None, help="output directory")
        sub.add_argument(
            "--colour-rule",
            choices=["closure", "tuple"],
            default=None,
            help="override sampler.colour_rule",
        )
        sub.add_argument(
            "--symmetric-irreflexive",
            action="store_true",
            default=None,
            help="store relations as symmetric irreflexive sets",
        )
        sub.add_argument(
            "--strong",
            action="store_true",
            default=None,
            help="use strong l-colourings",
        )
        sub.add_argument("--workers", type=int, default=None, help="estimation worker processes")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    harness = get_settings().harness
    configure_logging(harness.log_level, harness.log_json)

    try:
        spec = apply_overrides(
            load_spec(args.config),
            kind=args.command,
            seed=args.seed,
            colour_rule=args.colour_rule,
            symmetric_irreflexive=args.symmetric_irreflexive,
            strong=args.strong,
        )
    except Exception as e:
        logger.error("config_rejected", config=str(args.config), error=str(e))
        return EXIT_CONFIG

    if args.workers is not None and args.workers < 1:
        logger.error("config_rejected", error="--workers must be at least 1")
        return EXIT_CONFIG

    try:
        result = run(spec, args.out, args.workers)
    except Exception as e:
        logger.exception("run_crashed", error=str(e))
        return EXIT_INVARIANT

    if result.error:
        logger.error("run_failed", exit_code=result.exit_code, error=result.error, out_dir=str(result.out_dir))
    else:
        logger.info("run_complete", out_dir=str(result.out_dir), outputs=sorted(result.outputs))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
