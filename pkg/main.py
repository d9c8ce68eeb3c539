"""
Main entry point for rlfont
Subcommands live in app/cli; this module wires them up and maps errors to exit codes.
"""
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from log_config import setup_logging
from app.cli import ArgumentParser, bench, convert, detect, features, segment, synth, train
from app.core.config import APP_DESCRIPTION, APP_TITLE, APP_VERSION
from app.core.dependencies import logger
from app.core.exceptions import RlfontError


COMMANDS = (convert, synth, segment, features, train, detect, bench)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="rlfont", description=f"{APP_TITLE}. {APP_DESCRIPTION}.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging with timestamps")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand; returns 0 on success, 1 on input errors, 2 on invariant violations"""
    setup_logging()
    try:
        args = build_parser().parse_args(argv)
        setup_logging(args.log_level, args.verbose)
        return args.handler(args)
    except RlfontError as e:
        logger.error(e.message)
        return e.exit_code
    except ValidationError as e:
        logger.error(f"invalid value: {e.errors()[0]['msg']}")
        return 1
    except OSError as e:
        logger.error(f"{e.filename or ''}: {e.strerror or e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
