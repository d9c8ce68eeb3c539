"""
train - fit the font size regression models
"""
import argparse
import logging

from app.cli import UsageError, add_jobs, add_min_height, emit
from app.core.dependencies import worker_pool
from app.services.docio_service import read_document
from app.services.regression_service import (
    collect_training_sets,
    fit,
    format_models,
    reference_models,
    save_models,
)
from app.services.synthgen_service import read_truth

logger = logging.getLogger(__name__)


def run(args: argparse.Namespace) -> int:
    if args.reference:
        models = reference_models()
    else:
        if not args.pages or not args.truth:
            raise UsageError("train: --pages and --truth are required unless --reference is given")
        if len(args.pages) != len(args.truth):
            raise UsageError(f"train: {len(args.pages)} pages but {len(args.truth)} truth files")
        pages = [(read_document(page), read_truth(truth)) for page, truth in zip(args.pages, args.truth)]
        with worker_pool(args.jobs) as mapper:
            training_sets = collect_training_sets(pages, args.min_height, mapper=mapper)
        if not training_sets:
            raise UsageError("train: no usable text lines in the training pages")
        models = {feature: fit(ts) for feature, ts in training_sets.items()}
        for feature, ts in training_sets.items():
            sizes = sorted({size for size, _ in ts.samples})
            logger.info(f"{feature.value}: {len(ts.samples)} samples over sizes {sizes}")

    save_models(models, args.output)
    emit(format_models(models))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("train", help="fit regression models from pages with ground truth")
    parser.add_argument("--pages", nargs="+", default=[], help="training pages (.rld or .pbm)")
    parser.add_argument("--truth", nargs="+", default=[], help="ground truth files, one per page")
    parser.add_argument("--out", dest="output", required=True, help="models file to write")
    parser.add_argument(
        "--reference",
        action="store_true",
        help="fit the built-in measured feature ranges instead of pages",
    )
    add_min_height(parser)
    add_jobs(parser)
    parser.set_defaults(handler=run)
