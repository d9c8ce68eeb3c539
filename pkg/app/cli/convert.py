"""
convert - PBM <-> RLD document conversion
"""
import argparse
import logging

from app.services.docio_service import read_document, write_document

logger = logging.getLogger(__name__)


def run(args: argparse.Namespace) -> int:
    img = read_document(args.input)
    write_document(img, args.output)
    logger.info(f"Converted {args.input} -> {args.output} ({img.width}x{img.height}, {img.pair_count} pairs)")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("convert", help="convert between .pbm and .rld documents")
    parser.add_argument("--in", dest="input", required=True, help="source .pbm or .rld")
    parser.add_argument("--out", dest="output", required=True, help="destination .pbm or .rld")
    parser.set_defaults(handler=run)
