"""
3DS fraud lab command line.

Usage:
    threeds-lab simulate --preset published --seed 7 --out d.csv
    threeds-lab fit --data d.csv --response challenged
    threeds-lab curves --vary region --by value
"""

import argparse
import sys
from typing import List, Optional

from loguru import logger

from app import __version__
from app.commands import COMMANDS
from app.core.config import settings
from app.core.exceptions import LabError
from app.core.logging import setup_logging


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threeds-lab",
        description=f"{settings.APP_NAME}: simulate 3DS 2.0 transactions and replicate the fraud-detection analysis",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help=f"Log level on stderr (default: {settings.LOG_LEVEL})")
    subparsers = parser.add_subparsers(dest="command", metavar="<command>", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 for --help
        return int(e.code or 0)

    setup_logging(args.log_level)
    try:
        output = args.handler(args)
    except LabError as e:
        logger.error(f"❌ {e.message}")
        logger.debug(f"Error detail: {e.detail}")
        if e.exit_code == 2:
            parser.print_usage(sys.stderr)
        return e.exit_code

    sys.stdout.write(output)
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
