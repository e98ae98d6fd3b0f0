"""
ESP Designs Report CLI
Reproduces the block-set, design, code and group claims as named checks

Usage:
    python report_cli.py blocks --q 16 --family plain:5,2 --out steiner.json
    python report_cli.py verify steiner.json --t 3 --lambda 1
    python report_cli.py code --q 32
    python report_cli.py group --q 32 --sample 100
    python report_cli.py paper-suite --q 16 --q 32
    python report_cli.py properties
"""
import argparse
import logging
import sys
import uuid

from src.report.commands import cmd_blocks, cmd_code, cmd_group, cmd_paper_suite, cmd_properties, cmd_verify
from src.utils.config import get_settings, override
from src.utils.errors import (
    BlockFileError,
    ConfigError,
    ConsistencyError,
    PreconditionError,
    UnsupportedFamilyError,
)
from src.utils.observability import ObservabilityContext, console, setup_logging

logger = logging.getLogger("src.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="report_cli", description=__doc__.split("\n")[2])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (defaults to ESPDESIGNS_OUTPUT_DIR)")
    common.add_argument("--jobs", type=int, help="worker processes")
    common.add_argument("--heavy", action="store_true", default=None, help="enable the long q=64 scans")
    common.add_argument("--sample", type=int, help="group elements drawn for invariance checks")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")

    sub = parser.add_subparsers(dest="command", required=True)

    blocks = sub.add_parser("blocks", parents=[common], help="generate a block-set file")
    blocks.add_argument("--q", type=int, required=True)
    blocks.add_argument("--family", required=True, help="plain:k,l | u:k,l | b:k,l | bbar:k,l | zero63 | ...")
    blocks.add_argument("--file", help="block-set file to write (defaults inside --out)")

    verify = sub.add_parser("verify", parents=[common], help="verify a block-set file as a t-design")
    verify.add_argument("blocks_path")
    verify.add_argument("--t", type=int, required=True)
    verify.add_argument("--lambda", dest="lam", type=int, help="required index")

    code = sub.add_parser("code", parents=[common], help="code parameters and weight tables")
    code.add_argument("--q", type=int, required=True)

    group = sub.add_parser("group", parents=[common], help="closure, orbits and invariance")
    group.add_argument("--q", type=int, required=True)

    suite = sub.add_parser("paper-suite", parents=[common], help="run every named check")
    suite.add_argument("--q", type=int, action="append", dest="q_list", help="repeatable; default 16 32 64")

    sub.add_parser("properties", parents=[common], help="run the property suites")
    return parser


def run(args: argparse.Namespace) -> int:
    settings = override(
        get_settings(),
        output_dir=args.out,
        jobs=args.jobs,
        heavy=args.heavy,
        sample=args.sample,
        log_level=args.log_level,
    )
    setup_logging(settings.log_level)

    with ObservabilityContext(f"{args.command}-{uuid.uuid4().hex[:8]}"):
        if args.command == "blocks":
            cmd_blocks(args.q, args.family, args.file, settings)
            return EXIT_OK
        if args.command == "verify":
            result = cmd_verify(args.blocks_path, args.t, settings, args.lam)
            return EXIT_OK if result.passed else EXIT_FAILED
        if args.command == "code":
            cmd_code(args.q, settings)
            return EXIT_OK
        if args.command == "group":
            report = cmd_group(args.q, settings)
            invariant = all(v["invariant"] for v in report["invariance"].values())
            alltop = report.get("alltop", {}).get("equal_to_b53", True)
            return EXIT_OK if invariant and alltop else EXIT_FAILED
        if args.command == "paper-suite":
            reports = cmd_paper_suite(args.q_list or [16, 32, 64], settings)
            return EXIT_FAILED if any(r.failed for r in reports) else EXIT_OK
        if args.command == "properties":
            return EXIT_FAILED if cmd_properties(settings).failed else EXIT_OK
    return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (BlockFileError, ConfigError, UnsupportedFamilyError, PreconditionError, OSError) as e:
        console.print(f"❌ {e}")
        return EXIT_USAGE
    except ConsistencyError as e:
        console.print(f"❌ consistency failure: {e}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
