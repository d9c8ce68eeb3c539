"""
Oracle service - the same measurements taken on the decompressed raster

Used by tests and the benchmark to check the compressed-domain results.
"""
import logging
from typing import List

import numpy as np

from app.core.config import MIN_LINE_HEIGHT
from app.core.exceptions import ExtentError
from app.services.feature_service import find_peaks
from app.services.rle_service import decode
from schemas import Bitmap, CompressedImage, LineBounds, LineFeatures, ProjectionProfile

logger = logging.getLogger(__name__)


def raster_row_sums(pixels: np.ndarray) -> np.ndarray:
    return pixels.sum(axis=1, dtype=np.int64)


def raster_vpp(bitmap: Bitmap) -> ProjectionProfile:
    """Row ink counts by summing raster rows"""
    return ProjectionProfile(values=tuple(int(v) for v in raster_row_sums(bitmap.pixels)))


def decoded_vpp(img: CompressedImage) -> ProjectionProfile:
    """Decompress then sum rows; the path compressed-domain profiling avoids"""
    return raster_vpp(decode(img))


def raster_segment(bitmap: Bitmap, min_height: int = MIN_LINE_HEIGHT) -> List[LineBounds]:
    inked = np.concatenate(([0], (raster_row_sums(bitmap.pixels) > 0).astype(np.int8), [0]))
    edges = np.diff(inked)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    return [
        LineBounds(first_row=int(s) + 1, last_row=int(e))
        for s, e in zip(starts, ends)
        if e - s >= min_height
    ]


def _row_pairs(row: np.ndarray) -> int:
    starts = int(np.count_nonzero(np.diff(np.concatenate(([0], row.astype(np.int8)))) == 1))
    if starts == 0:
        return 1
    return starts + int(row[-1] == 0)


def raster_features(line: Bitmap) -> LineFeatures:
    """Line features from the raster of one text line"""
    pixels = line.pixels
    height, width = pixels.shape
    profile = raster_row_sums(pixels)
    closed = np.diff(np.append(profile, 0)).tolist()
    m1, m2 = find_peaks(closed)

    inked = pixels.astype(bool)
    any_ink = inked.any(axis=1)
    leading = np.where(any_ink, inked.argmax(axis=1), width)
    trailing = np.where(any_ink, inked[:, ::-1].argmax(axis=1), width)
    r = width - int(leading.min() + trailing.max())
    if r <= 0:
        raise ExtentError(f"text extent r={r} must be positive")

    length = 2 * max(_row_pairs(row) for row in pixels)
    return LineFeatures(
        h=height,
        b=m2 - m1,
        a=m2,
        d=height - m1,
        m1=m1,
        m2=m2,
        l=length,
        r=r,
        R=length / r,
    )
