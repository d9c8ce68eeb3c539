"""
Command-line subcommands

Each module exposes register(subparsers), which adds its parser and binds
run(args) -> exit code as the handler.
"""
import argparse
import sys
from typing import Tuple

from app.core.config import MIN_LINE_HEIGHT
from app.core.exceptions import InputError


class UsageError(InputError):
    """Bad command-line arguments"""


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that reports usage problems as input errors (exit 1)"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def font_sizes(text: str) -> Tuple[int, ...]:
    """Parse a comma-separated list of positive integer point sizes"""
    try:
        sizes = tuple(sorted({int(part) for part in text.split(",") if part.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid font size list {text!r}") from None
    if not sizes or sizes[0] < 1:
        raise argparse.ArgumentTypeError(f"font sizes must be positive integers, got {text!r}")
    return sizes


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def add_min_height(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--min-height",
        type=positive_int,
        default=MIN_LINE_HEIGHT,
        help=f"shortest ink run kept as a text line (default {MIN_LINE_HEIGHT})",
    )


def add_jobs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--jobs", type=positive_int, default=1, help="worker processes for multi-page runs")


def emit(text: str) -> None:
    sys.stdout.write(text)
