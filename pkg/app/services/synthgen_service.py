"""
Synthetic document service - seeded pages of text-line shaped ink with ground truth

Each line is drawn in raster space from a LineGeometry (h, b, a):
    base band rows a-b+1 .. a      glyph blocks grouped into words
    ascender strokes rows 1 .. a   left edge of a seeded subset of glyphs
    descender strokes a-b+1 .. h   likewise (none for ascender-rich lines)
    upper-case lines               glyph blocks over rows 1 .. a
The last glyph always carries the ascender (and descender) stroke on its right
edge, so every row of a line ends at the same column.
"""
import logging
import math
import re
from pathlib import Path
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.config import (
    ASCENDER_PROBABILITY,
    DESCENDER_PROBABILITY,
    FORMAT_HEADER,
    GLYPH_GAP_RANGE,
    LINE_GAP,
    MAX_GLYPH_WIDTH,
    MIN_GLYPH_WIDTH,
    PAGE_HEIGHT,
    PAGE_MARGIN,
    PAGE_WIDTH,
    TRAINING_FEATURE_RANGES,
    WORD_LENGTH_RANGE,
)
from app.core.exceptions import DocumentIOError, GeometryError, LayoutError, LineSpecError, TruthFileError
from schemas import (
    Bitmap,
    GeometryTable,
    GroundTruth,
    LineClassLabel,
    LineGeometry,
    LineSpec,
    TruthLine,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_TRUTH_LINE = re.compile(
    r"^line (?P<k>\d+): rows=(?P<first>\d+)\.\.(?P<last>\d+) size=(?P<size>\d+) "
    r"class=(?P<cls>\w+) r=(?P<r>\d+)$"
)
_SPEC_LINE = re.compile(r"^size=(?P<size>\d+)\s+class=(?P<cls>\w+)(?:\s+fill=(?P<fill>\S+))?$")


class GlyphLayout(NamedTuple):
    """Inclusive pixel ranges drawn per glyph, gap and word space"""
    width: Tuple[int, int]
    gap: Tuple[int, int]
    space: Tuple[int, int]


def round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def stroke_width(size: int) -> int:
    """Vertical stroke width; grows with font size"""
    return max(2, round_half_up(size / 5))


def glyph_layout(size: int, line_class: LineClassLabel) -> GlyphLayout:
    """
    Horizontal layout for a font size

    Everything scales with size, so larger fonts put fewer runs on a line
    of fixed length. Mixed-case lines keep roughly a third of the baseline
    row inked; upper-case glyphs are wider and set tighter.
    """
    low = max(MIN_GLYPH_WIDTH, size // 2)
    if line_class == LineClassLabel.UPPER_CASE:
        high = max(low, min(MAX_GLYPH_WIDTH, size))
        return GlyphLayout(width=(low, high), gap=GLYPH_GAP_RANGE, space=(size, 2 * size))
    high = max(low, min(MAX_GLYPH_WIDTH, 3 * size // 4))
    gap = (max(GLYPH_GAP_RANGE[0], size // 2), max(GLYPH_GAP_RANGE[1], size))
    return GlyphLayout(width=(low, high), gap=gap, space=(2 * size, 4 * size))


def _midpoints(column: str) -> Dict[int, float]:
    return {size: sum(ranges[column]) / 2 for size, ranges in TRAINING_FEATURE_RANGES.items()}


def default_geometry() -> GeometryTable:
    """Rounded-up midpoints of the measured training ranges for the standard sizes"""
    return interpolated_geometry(sorted(TRAINING_FEATURE_RANGES))


def interpolated_geometry(sizes: Iterable[int]) -> GeometryTable:
    """
    Geometry for arbitrary sizes between the smallest and largest standard size,
    linearly interpolated between neighbouring midpoints and rounded half up
    """
    columns = {name: _midpoints(column) for name, column in (("h", "height"), ("b", "base"), ("a", "ascender"))}
    known = sorted(TRAINING_FEATURE_RANGES)
    entries = {}
    for size in sorted(set(sizes)):
        if not known[0] <= size <= known[-1]:
            raise GeometryError(f"font size {size} outside {known[0]}..{known[-1]}")
        upper = next(s for s in known if s >= size)
        lower = max(s for s in known if s <= size)
        fraction = 0.0 if upper == lower else (size - lower) / (upper - lower)
        values = {
            name: round_half_up(mid[lower] + (mid[upper] - mid[lower]) * fraction)
            for name, mid in columns.items()
        }
        entries[size] = LineGeometry(**values)
    return GeometryTable(entries=entries)


class SyntheticPageGenerator:
    """Draws pages of synthetic text lines with ground truth"""

    def __init__(
        self,
        geometry: Optional[GeometryTable] = None,
        page_width: int = PAGE_WIDTH,
        page_height: int = PAGE_HEIGHT,
        margins: int = PAGE_MARGIN,
        gap: int = LINE_GAP,
    ):
        if gap < 1:
            raise LayoutError(f"line gap {gap} must be at least 1 row")
        if margins < 0 or page_width - 2 * margins < MIN_GLYPH_WIDTH or page_height - 2 * margins < 1:
            raise LayoutError(f"margins {margins} leave no room on a {page_width}x{page_height} page")
        self.geometry = geometry or default_geometry()
        self.page_width = page_width
        self.page_height = page_height
        self.margins = margins
        self.gap = gap

    def line_height(self, spec: LineSpec) -> int:
        geometry = self.geometry[spec.font_size]
        if spec.line_class == LineClassLabel.ASCENDER_AND_DESCENDER_RICH:
            return geometry.h
        return geometry.a

    def _glyph_spans(self, rng: np.random.Generator, spec: LineSpec) -> List[Tuple[int, int]]:
        layout = glyph_layout(spec.font_size, spec.line_class)
        x_start = self.margins
        x_limit = x_start + int((self.page_width - 2 * self.margins) * spec.fill_fraction)
        spans: List[Tuple[int, int]] = []
        x = x_start
        while True:
            letters = int(rng.integers(WORD_LENGTH_RANGE[0], WORD_LENGTH_RANGE[1] + 1))
            for letter in range(letters):
                width = int(rng.integers(layout.width[0], layout.width[1] + 1))
                if x + width > x_limit:
                    if not spans:
                        raise LayoutError(f"fill {spec.fill_fraction} leaves no room for a glyph of size {spec.font_size}")
                    return spans
                spans.append((x, x + width))
                x += width
                if letter < letters - 1:
                    x += int(rng.integers(layout.gap[0], layout.gap[1] + 1))
            x += int(rng.integers(layout.space[0], layout.space[1] + 1))

    def _draw_strokes(
        self,
        band: np.ndarray,
        spans: Sequence[Tuple[int, int]],
        chosen: np.ndarray,
        stroke: int,
    ) -> None:
        last = len(spans) - 1
        for index, (x0, x1) in enumerate(spans):
            if index == last:
                band[:, x1 - stroke:x1] = 1
            elif chosen[index]:
                band[:, x0:x0 + stroke] = 1

    def render_line(self, rng: np.random.Generator, spec: LineSpec) -> Tuple[np.ndarray, int, int]:
        """
        Draw one line

        Returns:
            (line raster of line_height rows x page_width, first ink column, end column exclusive)
        """
        geometry = self.geometry[spec.font_size]
        height = self.line_height(spec)
        a, b = geometry.a, geometry.b
        line = np.zeros((height, self.page_width), dtype=np.uint8)
        spans = self._glyph_spans(rng, spec)

        if spec.line_class == LineClassLabel.UPPER_CASE:
            for x0, x1 in spans:
                line[0:a, x0:x1] = 1
            return line, spans[0][0], spans[-1][1]

        stroke = stroke_width(spec.font_size)
        for x0, x1 in spans:
            line[a - b:a, x0:x1] = 1
        ascenders = rng.random(len(spans)) < ASCENDER_PROBABILITY
        self._draw_strokes(line[0:a], spans, ascenders, stroke)
        if spec.line_class == LineClassLabel.ASCENDER_AND_DESCENDER_RICH:
            descenders = rng.random(len(spans)) < DESCENDER_PROBABILITY
            self._draw_strokes(line[a - b:height], spans, descenders, stroke)
        return line, spans[0][0], spans[-1][1]

    def generate(self, specs: Sequence[LineSpec], seed: int) -> Tuple[Bitmap, GroundTruth]:
        """
        Draw a page with one text line per spec, top to bottom

        Args:
            specs: Lines to draw
            seed: Seed for the glyph layout; identical inputs give identical pixels

        Returns:
            (page bitmap, ground truth)
        """
        rng = np.random.default_rng(seed)
        canvas = np.zeros((self.page_height, self.page_width), dtype=np.uint8)
        truth_lines = []
        top = self.margins
        bottom_limit = self.page_height - self.margins
        for spec in specs:
            height = self.line_height(spec)
            if top + height > bottom_limit:
                raise LayoutError(
                    f"line {len(truth_lines) + 1} (size {spec.font_size}) overflows the page at row {top + height}"
                )
            line, x_start, x_end = self.render_line(rng, spec)
            canvas[top:top + height] = line
            truth_lines.append(
                TruthLine(
                    first_row=top + 1,
                    last_row=top + height,
                    font_size=spec.font_size,
                    line_class=spec.line_class,
                    text_extent_r=x_end - x_start,
                )
            )
            top += height + self.gap

        logger.debug(f"Generated {len(truth_lines)} lines on a {self.page_width}x{self.page_height} page (seed {seed})")
        return Bitmap(pixels=canvas), GroundTruth(lines=tuple(truth_lines))


def generate_page(
    specs: Sequence[LineSpec],
    page_width: int = PAGE_WIDTH,
    margins: int = PAGE_MARGIN,
    gap: int = LINE_GAP,
    seed: int = 0,
    page_height: int = PAGE_HEIGHT,
    geometry: Optional[GeometryTable] = None,
) -> Tuple[Bitmap, GroundTruth]:
    generator = SyntheticPageGenerator(
        geometry=geometry, page_width=page_width, page_height=page_height, margins=margins, gap=gap
    )
    return generator.generate(specs, seed)


# Ground truth and line spec files
def format_truth(truth: GroundTruth) -> str:
    lines = [FORMAT_HEADER]
    for k, line in enumerate(truth.lines, start=1):
        lines.append(
            f"line {k}: rows={line.first_row}..{line.last_row} size={line.font_size} "
            f"class={line.line_class.value} r={line.text_extent_r}"
        )
    return "\n".join(lines) + "\n"


def parse_truth(text: str) -> GroundTruth:
    lines = []
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        match = _TRUTH_LINE.match(line)
        if match is None:
            raise TruthFileError(f"malformed ground truth line {raw_line!r}", number)
        try:
            line_class = LineClassLabel(match["cls"])
        except ValueError:
            raise TruthFileError(f"unknown line class {match['cls']!r}", number) from None
        if int(match["first"]) > int(match["last"]) or int(match["r"]) < 1:
            raise TruthFileError(f"invalid row range or extent in {raw_line!r}", number)
        lines.append(
            TruthLine(
                first_row=int(match["first"]),
                last_row=int(match["last"]),
                font_size=int(match["size"]),
                line_class=line_class,
                text_extent_r=int(match["r"]),
            )
        )
    for previous, current in zip(lines, lines[1:]):
        if current.first_row <= previous.last_row:
            raise TruthFileError(f"line rows {current.first_row}..{current.last_row} overlap or are out of order")
    return GroundTruth(lines=tuple(lines))


def write_truth(truth: GroundTruth, path: PathLike) -> None:
    try:
        Path(path).write_text(format_truth(truth), encoding="utf-8")
    except OSError as e:
        raise DocumentIOError(f"{path}: {e.strerror or e}") from e


def read_truth(path: PathLike) -> GroundTruth:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentIOError(f"{path}: {e.strerror or e}") from e
    return parse_truth(text)


def parse_line_specs(text: str) -> List[LineSpec]:
    """Parse 'size=<s> class=<c> fill=<f>' lines; fill defaults to 1"""
    specs = []
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        match = _SPEC_LINE.match(line)
        if match is None:
            raise LineSpecError(f"malformed line spec {raw_line!r}", number)
        try:
            line_class = LineClassLabel(match["cls"])
        except ValueError:
            raise LineSpecError(f"unknown line class {match['cls']!r}", number) from None
        try:
            fill = float(match["fill"]) if match["fill"] else 1.0
        except ValueError:
            raise LineSpecError(f"malformed fill {match['fill']!r}", number) from None
        if not 0 < fill <= 1:
            raise LineSpecError(f"fill {fill} outside (0, 1]", number)
        specs.append(LineSpec(font_size=int(match["size"]), line_class=line_class, fill_fraction=fill))
    return specs


def read_line_specs(path: PathLike) -> List[LineSpec]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentIOError(f"{path}: {e.strerror or e}") from e
    return parse_line_specs(text)
