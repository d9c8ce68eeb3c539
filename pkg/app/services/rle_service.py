"""
Run-length service - conversion between raster bitmaps and compressed images

Rows always start with a (possibly empty) white run and always hold whole
(white, black) pairs; a row ending on white gets a trailing black run of 0.
"""
import logging
from typing import List, Tuple

import numpy as np

from app.core.exceptions import BoundsError, DimensionError
from schemas import Bitmap, CompressedImage, RunPair, check_rows

logger = logging.getLogger(__name__)


def encode_row(row: np.ndarray) -> Tuple[RunPair, ...]:
    """Encode one binary raster row into run pairs"""
    width = row.shape[0]
    padded = np.concatenate(([0], row.astype(np.int8), [0]))
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    if starts.size == 0:
        return (RunPair(width, 0),)

    previous_ends = np.concatenate(([0], ends[:-1]))
    whites = (starts - previous_ends).tolist()
    blacks = (ends - starts).tolist()
    pairs = [RunPair(w, b) for w, b in zip(whites, blacks)]
    trailing = width - int(ends[-1])
    if trailing > 0:
        pairs.append(RunPair(trailing, 0))
    return tuple(pairs)


def encode(bitmap: Bitmap) -> CompressedImage:
    """Compress a bitmap row by row"""
    if bitmap.width == 0 or bitmap.height == 0:
        raise DimensionError("cannot encode an empty bitmap")
    rows = tuple(encode_row(row) for row in bitmap.pixels)
    return CompressedImage.model_construct(width=bitmap.width, rows=rows)


def decode(img: CompressedImage) -> Bitmap:
    """Expand a compressed image back to raster; oracle path only"""
    check_rows(img.width, img.rows)
    pixels = np.zeros((img.height, img.width), dtype=np.uint8)
    for index, row in enumerate(img.rows):
        x = 0
        for white, black in row:
            x += white
            if black:
                pixels[index, x:x + black] = 1
                x += black
    return Bitmap(pixels=pixels)


def extract_rows(img: CompressedImage, first: int, last: int) -> CompressedImage:
    """Slice rows first..last (1-based, inclusive) out of an image"""
    if not 1 <= first <= last <= img.height:
        raise BoundsError(f"rows {first}..{last} outside 1..{img.height}")
    return CompressedImage.model_construct(width=img.width, rows=img.rows[first - 1:last])


def as_matrix(img: CompressedImage) -> np.ndarray:
    """Fixed-shape m' x (n'/2) x 2 view, ragged rows padded with (0, 0) pairs"""
    columns = max(len(row) for row in img.rows)
    matrix = np.zeros((img.height, columns, 2), dtype=np.uint32)
    for index, row in enumerate(img.rows):
        matrix[index, :len(row)] = row
    return matrix


def run_counts(img: CompressedImage) -> List[int]:
    """Pairs stored per row"""
    return [len(row) for row in img.rows]
