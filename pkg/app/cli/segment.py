"""
segment - list the text line bounds of a page
"""
import argparse

from app.core.config import FORMAT_HEADER
from app.cli import add_min_height, emit
from app.services.docio_service import read_document
from app.services.segmentation_service import segment_page


def run(args: argparse.Namespace) -> int:
    img = read_document(args.input)
    segmentation = segment_page(img, args.min_height)
    rows = [
        FORMAT_HEADER,
        f"# page {img.width}x{img.height} lines={len(segmentation.lines)} discarded={segmentation.discarded}",
    ]
    for k, bounds in enumerate(segmentation.lines, start=1):
        rows.append(f"line {k}: rows={bounds.label()} height={bounds.height}")
    emit("\n".join(rows) + "\n")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("segment", help="split a page into text lines")
    parser.add_argument("--in", dest="input", required=True, help="page .rld or .pbm")
    add_min_height(parser)
    parser.set_defaults(handler=run)
