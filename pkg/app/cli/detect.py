"""
detect - per-line font size detection with optional scoring
"""
import argparse
import logging

from app.cli import UsageError, add_jobs, add_min_height, emit, font_sizes
from app.core.config import MHD_HIGH, MHD_LOW, STANDARD_FONT_SIZES
from app.core.dependencies import worker_pool
from app.services.detector_service import (
    FontSizeDetector,
    combine_scores,
    detect_pages,
    render_regions,
    render_score,
    render_tsv,
    score,
)
from app.services.docio_service import read_document
from app.services.regression_service import load_models
from app.services.synthgen_service import read_truth
from schemas import DetectorOptions, MhdThresholds

logger = logging.getLogger(__name__)

RENDERERS = {"tsv": render_tsv, "regions": render_regions}


def run(args: argparse.Namespace) -> int:
    if args.truth and len(args.truth) != len(args.input):
        raise UsageError(f"detect: {len(args.input)} pages but {len(args.truth)} truth files")

    options = DetectorOptions(
        candidates=args.sizes,
        thresholds=MhdThresholds(low=args.mhd_low, high=args.mhd_high),
        min_height=args.min_height,
        route_ascender_rich=not args.line_height_only,
    )
    detector = FontSizeDetector(load_models(args.models), options)
    truths = [read_truth(path) for path in args.truth or []]
    pages = [read_document(path) for path in args.input]
    with worker_pool(args.jobs) as mapper:
        reports = detect_pages(pages, detector, mapper)

    render = RENDERERS[args.format]
    for path, report in zip(args.input, reports):
        if len(reports) > 1:
            emit(f"# page {path}\n")
        emit(render(report))

    if truths:
        result = combine_scores(score(report, truth) for report, truth in zip(reports, truths))
        emit(render_score(result))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("detect", help="detect the font size of every text line")
    parser.add_argument("--in", dest="input", nargs="+", required=True, help="pages (.rld or .pbm)")
    parser.add_argument("--models", required=True, help="models file written by train")
    parser.add_argument(
        "--sizes",
        type=font_sizes,
        default=STANDARD_FONT_SIZES,
        help="candidate font sizes, comma separated (default 8,10,...,20)",
    )
    parser.add_argument("--mhd-low", type=float, default=MHD_LOW, help="ascender-rich band starts here (%%)")
    parser.add_argument("--mhd-high", type=float, default=MHD_HIGH, help="upper-case band starts here (%%)")
    parser.add_argument("--truth", nargs="+", help="ground truth files; adds an accuracy table")
    parser.add_argument(
        "--line-height-only",
        action="store_true",
        help="size every line with the line height model",
    )
    parser.add_argument("--format", choices=sorted(RENDERERS), default="tsv")
    add_min_height(parser)
    add_jobs(parser)
    parser.set_defaults(handler=run)
