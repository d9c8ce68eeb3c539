"""
Bench service - compressed-domain profiling against decode plus raster row sums
"""
import logging
import time
from typing import Callable

from app.core.config import BENCH_ITERATIONS, FORMAT_HEADER
from app.core.exceptions import InvariantViolation, ParameterError
from app.services.docio_service import rldoc_bytes
from app.services.oracle_service import decoded_vpp
from app.services.segmentation_service import RunVisitCounter, vpp
from schemas import BenchReport, CompressedImage

logger = logging.getLogger(__name__)


def best_time(func: Callable[[], object], iterations: int) -> float:
    """Best wall time of iterations calls"""
    timings = []
    for _ in range(iterations):
        start = time.perf_counter()
        func()
        timings.append(time.perf_counter() - start)
    return min(timings)


def format_dt(dt: float, sign: bool = False) -> str:
    prefix = "+" if sign else ""
    if abs(dt) > 10e-3:
        return f"{dt * 1e3:{prefix}.1f} ms"
    if abs(dt) > 10e-6:
        return f"{dt * 1e6:{prefix}.1f} us"
    return f"{dt * 1e9:{prefix}.0f} ns"


def compared_dt(fast_dt: float, slow_dt: float) -> str:
    percent = (fast_dt - slow_dt) * 100 / slow_dt if slow_dt else 0.0
    ratio = slow_dt / fast_dt if fast_dt else float("inf")
    what = "faster" if ratio >= 1.0 else "slower"
    return f"{format_dt(fast_dt)} ({format_dt(fast_dt - slow_dt, sign=True)}, {percent:+.1f}%, {ratio:.1f}x {what})"


def run_bench(img: CompressedImage, iterations: int = BENCH_ITERATIONS) -> BenchReport:
    """
    Time both profiling paths on one page

    The compressed path must visit every stored pair exactly once and both
    paths must agree on the profile.
    """
    if iterations < 1:
        raise ParameterError("iterations must be at least 1")
    counter = RunVisitCounter()
    profile = vpp(img, counter)
    if counter.visits != img.pair_count:
        raise InvariantViolation(f"profiling visited {counter.visits} pairs, page stores {img.pair_count}")
    if decoded_vpp(img).values != profile.values:
        raise InvariantViolation("compressed and raster profiles differ")

    compressed = best_time(lambda: vpp(img), iterations)
    raster = best_time(lambda: decoded_vpp(img), iterations)
    p4_bytes = len(f"P4\n{img.width} {img.height}\n") + (img.width + 7) // 8 * img.height
    report = BenchReport(
        width=img.width,
        height=img.height,
        pairs=img.pair_count,
        run_visits=counter.visits,
        iterations=iterations,
        compressed_seconds=compressed,
        raster_seconds=raster,
        compression_ratio=img.width * img.height / (2 * img.pair_count),
        byte_ratio=p4_bytes / len(rldoc_bytes(img)),
    )
    logger.info(f"Bench {img.width}x{img.height}: compressed {format_dt(compressed)}, raster {format_dt(raster)}")
    return report


def render_bench(report: BenchReport) -> str:
    rows = [
        FORMAT_HEADER,
        f"page               {report.width}x{report.height}",
        f"run pairs          {report.pairs}",
        f"run visits         {report.run_visits}",
        f"compression ratio  {report.compression_ratio:.2f}:1 (pixels per run)",
        f"P4/RLD bytes       {report.byte_ratio:.2f}",
        f"iterations         {report.iterations}",
        f"raster VPP         {format_dt(report.raster_seconds)} (decode + row sums)",
        f"compressed VPP     {compared_dt(report.compressed_seconds, report.raster_seconds)}",
    ]
    return "\n".join(rows) + "\n"
