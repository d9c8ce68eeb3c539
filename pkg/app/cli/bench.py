"""
bench - compressed-domain profile timing against decode plus raster sums
"""
import argparse

from app.cli import emit, positive_int
from app.core.config import BENCH_ITERATIONS
from app.services.bench_service import render_bench, run_bench
from app.services.docio_service import read_document


def run(args: argparse.Namespace) -> int:
    report = run_bench(read_document(args.input), args.iters)
    emit(render_bench(report))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="time profiling on compressed versus raster data")
    parser.add_argument("--in", dest="input", required=True, help="page (.rld or .pbm)")
    parser.add_argument("--iters", type=positive_int, default=BENCH_ITERATIONS)
    parser.set_defaults(handler=run)
