"""
synth - generate a synthetic page and its ground truth
"""
import argparse
import logging

from app.core.config import LINE_GAP, PAGE_HEIGHT, PAGE_MARGIN, PAGE_WIDTH
from app.cli import positive_int
from app.services.docio_service import write_document
from app.services.rle_service import encode
from app.services.synthgen_service import generate_page, read_line_specs, write_truth

logger = logging.getLogger(__name__)


def run(args: argparse.Namespace) -> int:
    specs = read_line_specs(args.spec)
    bitmap, truth = generate_page(
        specs,
        page_width=args.width,
        page_height=args.height,
        margins=args.margin,
        gap=args.gap,
        seed=args.seed,
    )
    page = encode(bitmap)
    write_document(page, args.output)
    write_truth(truth, args.truth)
    logger.info(f"Wrote {len(truth.lines)} lines to {args.output} with truth {args.truth}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("synth", help="generate a synthetic page with ground truth")
    parser.add_argument("--spec", required=True, help="line spec file: size=<s> class=<c> fill=<f> per line")
    parser.add_argument("--seed", type=int, required=True)
    parser.add_argument("--out", dest="output", required=True, help="page .rld or .pbm")
    parser.add_argument("--truth", required=True, help="ground truth output file")
    parser.add_argument("--width", type=positive_int, default=PAGE_WIDTH)
    parser.add_argument("--height", type=positive_int, default=PAGE_HEIGHT)
    parser.add_argument("--margin", type=int, default=PAGE_MARGIN)
    parser.add_argument("--gap", type=int, default=LINE_GAP, help="white rows between lines")
    parser.set_defaults(handler=run)
