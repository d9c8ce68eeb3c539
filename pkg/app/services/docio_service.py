"""
Document I/O service - Netpbm PBM (P1/P4) and the RLD run-length document format

RLD layout, all integers 32-bit unsigned little-endian:
    b"RLD1" | width | height | per row: pair_count, then white, black, white, black, ...
"""
import logging
import struct
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from app.core.config import MAX_DIMENSION
from app.core.exceptions import CorruptRowError, DocumentIOError, PbmFormatError, RldocFormatError
from app.services.rle_service import decode, encode
from schemas import Bitmap, CompressedImage, RunPair

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

RLD_MAGIC = b"RLD1"
RLD_HEADER = struct.Struct("<4sII")
PBM_WHITESPACE = b" \t\n\r\v\f"


def _read_bytes(path: PathLike) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise DocumentIOError(f"{path}: {e.strerror or e}") from e


def _write_bytes(path: PathLike, payload: bytes) -> None:
    try:
        Path(path).write_bytes(payload)
    except OSError as e:
        raise DocumentIOError(f"{path}: {e.strerror or e}") from e


class _PbmHeaderReader:
    """Tokenizer for the Netpbm header; tracks byte offsets for error reporting"""

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def _skip_space_and_comments(self) -> None:
        data = self.data
        while self.offset < len(data):
            ch = data[self.offset:self.offset + 1]
            if ch == b"#":
                newline = data.find(b"\n", self.offset)
                self.offset = len(data) if newline < 0 else newline + 1
            elif ch in PBM_WHITESPACE:
                self.offset += 1
            else:
                break

    def read_int(self, what: str) -> int:
        self._skip_space_and_comments()
        start = self.offset
        while self.offset < len(self.data) and self.data[self.offset:self.offset + 1].isdigit():
            self.offset += 1
        if start == self.offset:
            raise PbmFormatError(f"expected {what}", start)
        value = int(self.data[start:self.offset])
        if value <= 0 or value > MAX_DIMENSION:
            raise PbmFormatError(f"{what} {value} outside 1..{MAX_DIMENSION}", start)
        return value


def read_pbm(path: PathLike) -> Bitmap:
    """
    Read a P1 (ASCII) or P4 (binary) PBM file

    Args:
        path: File to read

    Returns:
        Bitmap with 1 = black, as in PBM
    """
    data = _read_bytes(path)
    magic = data[:2]
    if magic not in (b"P1", b"P4"):
        raise PbmFormatError(f"bad magic {magic!r}, expected b'P1' or b'P4'", 0)

    header = _PbmHeaderReader(data)
    header.offset = 2
    width = header.read_int("width")
    height = header.read_int("height")

    if magic == b"P4":
        pixels = _read_p4_raster(data, header.offset, width, height)
    else:
        pixels = _read_p1_raster(data, header.offset, width, height)

    logger.debug(f"Read {magic.decode()} {width}x{height} from {path}")
    return Bitmap(pixels=pixels)


def _read_p4_raster(data: bytes, offset: int, width: int, height: int) -> np.ndarray:
    # exactly one whitespace byte separates the header from the raster
    if offset >= len(data) or data[offset:offset + 1] not in PBM_WHITESPACE:
        raise PbmFormatError("missing whitespace before raster", offset)
    offset += 1
    row_bytes = (width + 7) // 8
    needed = row_bytes * height
    available = len(data) - offset
    if available < needed:
        raise PbmFormatError(f"truncated raster: {available} of {needed} bytes", len(data))
    if available > needed:
        logger.debug(f"Ignoring {available - needed} bytes after the first image")
    packed = np.frombuffer(data, dtype=np.uint8, count=needed, offset=offset).reshape(height, row_bytes)
    return np.unpackbits(packed, axis=1)[:, :width]


def _read_p1_raster(data: bytes, offset: int, width: int, height: int) -> np.ndarray:
    needed = width * height
    values: List[int] = []
    position = offset
    while position < len(data) and len(values) < needed:
        ch = data[position:position + 1]
        if ch in (b"0", b"1"):
            values.append(ch == b"1")
        elif ch == b"#":
            newline = data.find(b"\n", position)
            position = len(data) if newline < 0 else newline
        elif ch not in PBM_WHITESPACE:
            raise PbmFormatError(f"unexpected byte {ch!r} in raster", position)
        position += 1
    if len(values) < needed:
        raise PbmFormatError(f"truncated raster: {len(values)} of {needed} pixels", len(data))
    return np.array(values, dtype=np.uint8).reshape(height, width)


def write_pbm(bitmap: Bitmap, path: PathLike) -> None:
    """Write canonical P4: 'P4\\n<w> <h>\\n' followed by MSB-first packed rows"""
    header = f"P4\n{bitmap.width} {bitmap.height}\n".encode("ascii")
    raster = np.packbits(bitmap.pixels, axis=1).tobytes()
    _write_bytes(path, header + raster)


def read_rldoc(path: PathLike) -> CompressedImage:
    """Read an RLD file, rejecting any row whose runs do not sum to the width"""
    data = _read_bytes(path)
    if len(data) < RLD_HEADER.size or data[:4] != RLD_MAGIC:
        raise RldocFormatError(f"bad magic {data[:4]!r}, expected {RLD_MAGIC!r}", 0)
    _, width, height = RLD_HEADER.unpack_from(data, 0)
    if width == 0 or height == 0:
        raise RldocFormatError(f"empty dimensions {width}x{height}", 4)
    if (len(data) - RLD_HEADER.size) % 4:
        raise RldocFormatError("payload is not a whole number of 32-bit words", len(data))

    words = np.frombuffer(data, dtype="<u4", offset=RLD_HEADER.size).astype(np.int64)
    rows: List[Tuple[RunPair, ...]] = []
    cursor = 0
    for row_index in range(1, height + 1):
        word_offset = RLD_HEADER.size + 4 * cursor
        if cursor >= words.size:
            raise RldocFormatError(f"truncated before row {row_index}", word_offset)
        count = int(words[cursor])
        runs = words[cursor + 1:cursor + 1 + 2 * count]
        if runs.size != 2 * count:
            raise RldocFormatError(f"row {row_index}: truncated run list", len(data))
        total = int(runs.sum())
        if count == 0 or total != width:
            raise CorruptRowError(row_index, total, width)
        runs_list = runs.tolist()
        rows.append(tuple(RunPair(runs_list[i], runs_list[i + 1]) for i in range(0, len(runs_list), 2)))
        cursor += 1 + 2 * count
    if cursor != words.size:
        raise RldocFormatError(f"{4 * (words.size - cursor)} trailing bytes", RLD_HEADER.size + 4 * cursor)

    logger.debug(f"Read RLD {width}x{height} with {cursor} words from {path}")
    return CompressedImage.model_construct(width=width, rows=tuple(rows))


def rldoc_bytes(img: CompressedImage) -> bytes:
    """Serialize to the RLD layout"""
    words: List[int] = []
    for row in img.rows:
        words.append(len(row))
        for white, black in row:
            words.append(white)
            words.append(black)
    payload = np.asarray(words, dtype="<u4").tobytes()
    return RLD_HEADER.pack(RLD_MAGIC, img.width, img.height) + payload


def write_rldoc(img: CompressedImage, path: PathLike) -> None:
    _write_bytes(path, rldoc_bytes(img))


def read_document(path: PathLike) -> CompressedImage:
    """Load a page as compressed data, from .rld directly or by encoding a .pbm"""
    suffix = Path(path).suffix.lower()
    if suffix == ".rld":
        return read_rldoc(path)
    if suffix == ".pbm":
        return encode(read_pbm(path))
    raise DocumentIOError(f"{path}: unsupported document type {suffix!r} (expected .pbm or .rld)")


def write_document(img: CompressedImage, path: PathLike) -> None:
    suffix = Path(path).suffix.lower()
    if suffix == ".rld":
        write_rldoc(img, path)
    elif suffix == ".pbm":
        write_pbm(decode(img), path)
    else:
        raise DocumentIOError(f"{path}: unsupported document type {suffix!r} (expected .pbm or .rld)")
