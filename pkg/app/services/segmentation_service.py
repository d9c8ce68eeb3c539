"""
Segmentation service - vertical projection profile and text line splitting,
computed on run data without decompressing
"""
import logging
from typing import List, Optional, Tuple

from app.core.config import MIN_LINE_HEIGHT
from app.services.rle_service import extract_rows
from schemas import CompressedImage, LineBounds, PageSegmentation, ProjectionProfile

logger = logging.getLogger(__name__)


class RunVisitCounter:
    """Counts run pairs read while building a profile"""

    def __init__(self):
        self.visits = 0


def vpp(img: CompressedImage, counter: Optional[RunVisitCounter] = None) -> ProjectionProfile:
    """
    Vertical projection profile: P(i) = sum of black runs in row i

    Args:
        img: Compressed page or line
        counter: Optional instrumentation; receives one visit per run pair

    Returns:
        ProjectionProfile with one value per row
    """
    values = tuple(sum(black for _, black in row) for row in img.rows)
    if counter is not None:
        counter.visits += sum(len(row) for row in img.rows)
    return ProjectionProfile.model_construct(values=values)


def _ink_runs(profile: ProjectionProfile) -> List[Tuple[int, int]]:
    """Maximal 1-based row ranges with P(i) > 0"""
    runs = []
    start = None
    for index, value in enumerate(profile.values, start=1):
        if value > 0 and start is None:
            start = index
        elif value == 0 and start is not None:
            runs.append((start, index - 1))
            start = None
    if start is not None:
        runs.append((start, len(profile.values)))
    return runs


def _split(profile: ProjectionProfile, min_height: int) -> Tuple[List[LineBounds], int]:
    lines = []
    discarded = 0
    for first, last in _ink_runs(profile):
        if last - first + 1 >= min_height:
            lines.append(LineBounds(first_row=first, last_row=last))
        else:
            discarded += 1
    return lines, discarded


def segment_lines(profile: ProjectionProfile, min_height: int = MIN_LINE_HEIGHT) -> List[LineBounds]:
    """Split a page profile at all-white rows, dropping ink runs shorter than min_height"""
    lines, discarded = _split(profile, min_height)
    if discarded:
        logger.debug(f"Discarded {discarded} ink runs shorter than {min_height} rows")
    return lines


def segment_page(img: CompressedImage, min_height: int = MIN_LINE_HEIGHT) -> PageSegmentation:
    """Profile a page and split it into lines, keeping the discard tally"""
    profile = vpp(img)
    lines, discarded = _split(profile, min_height)
    logger.info(f"Segmented {len(lines)} text lines ({discarded} specks discarded)")
    return PageSegmentation(profile=profile, lines=tuple(lines), discarded=discarded)


def extract_line(img: CompressedImage, bounds: LineBounds) -> CompressedImage:
    """Compressed data of one text line"""
    return extract_rows(img, bounds.first_row, bounds.last_row)
