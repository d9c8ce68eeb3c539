"""
features - per-line feature dump
"""
import argparse
import logging

from app.core.config import FORMAT_HEADER
from app.core.exceptions import ExtentError, FeatureError
from app.cli import add_min_height, emit
from app.services.feature_service import compressed_length, extract_features, mhd, text_extent
from app.services.segmentation_service import extract_line, segment_page, vpp
from app.services.docio_service import read_document
from schemas import CompressedImage, LineBounds

logger = logging.getLogger(__name__)

COLUMNS = ("row_range", "h", "b", "a", "d", "m1", "m2", "l", "r", "R", "mhd")


def feature_row(page: CompressedImage, bounds: LineBounds) -> str:
    """Tab-separated features of one line; '-' for values that need the missing peaks"""
    line = extract_line(page, bounds)
    profile = vpp(line)
    r = text_extent(line)
    length = compressed_length(line)
    peaks = ["-"] * 5
    try:
        feats = extract_features(line, profile)
        peaks = [str(v) for v in (feats.b, feats.a, feats.d, feats.m1, feats.m2)]
    except FeatureError as e:
        logger.warning(f"Line {bounds.label()}: {e.message}")
    extent = [str(length), str(r), "-", "-"]
    if r > 0:
        extent[2] = f"{length / r:.4f}"
        try:
            extent[3] = f"{mhd(profile, r):.2f}"
        except ExtentError as e:
            logger.warning(f"Line {bounds.label()}: {e.message}")
    return "\t".join([bounds.label(), str(bounds.height), *peaks, *extent])


def run(args: argparse.Namespace) -> int:
    img = read_document(args.input)
    segmentation = segment_page(img, args.min_height)
    rows = [FORMAT_HEADER, "\t".join(COLUMNS)]
    rows.extend(feature_row(img, bounds) for bounds in segmentation.lines)
    emit("\n".join(rows) + "\n")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("features", help="dump per-line features")
    parser.add_argument("--in", dest="input", required=True, help="page .rld or .pbm")
    add_min_height(parser)
    parser.set_defaults(handler=run)
