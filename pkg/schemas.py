from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import (
    MAX_DIMENSION,
    MAX_RUN_LENGTH,
    MHD_HIGH,
    MHD_LOW,
    MIN_LINE_HEIGHT,
    SHORT_LINE_DEVIATION,
    STANDARD_FONT_SIZES,
)
from app.core.exceptions import (
    CorruptRowError,
    DimensionError,
    GeometryError,
    InvariantViolation,
)


# Run-length schemas
class RunPair(NamedTuple):
    """One white run followed by one black run, in pixels"""
    white: int
    black: int


def check_rows(width: int, rows: Sequence[Sequence[RunPair]]) -> None:
    """Validate the row-sum and non-negativity invariants, naming the bad row (1-based)"""
    if width <= 0 or width > MAX_DIMENSION:
        raise DimensionError(f"width {width} outside 1..{MAX_DIMENSION}")
    if not rows:
        raise DimensionError("image has no rows")
    if len(rows) > MAX_DIMENSION:
        raise DimensionError(f"height {len(rows)} exceeds {MAX_DIMENSION}")
    for index, row in enumerate(rows, start=1):
        if not row:
            raise CorruptRowError(index, 0, width)
        total = 0
        for white, black in row:
            if white < 0 or black < 0 or white > MAX_RUN_LENGTH or black > MAX_RUN_LENGTH:
                raise CorruptRowError(index, -1, width)
            total += white + black
        if total != width:
            raise CorruptRowError(index, total, width)


class CompressedImage(BaseModel):
    """Page or text line as rows of (white, black) run pairs"""
    model_config = ConfigDict(frozen=True)

    width: int
    rows: Tuple[Tuple[RunPair, ...], ...]

    @model_validator(mode="after")
    def _rows_sum_to_width(self) -> "CompressedImage":
        check_rows(self.width, self.rows)
        return self

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def pair_count(self) -> int:
        return sum(len(row) for row in self.rows)


class Bitmap(BaseModel):
    """Raster binary image, 1 = black ink"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pixels: np.ndarray

    @field_validator("pixels", mode="before")
    @classmethod
    def _binary_grid(cls, value) -> np.ndarray:
        grid = np.array(value, dtype=np.uint8, copy=True)
        if grid.ndim != 2 or grid.shape[0] == 0 or grid.shape[1] == 0:
            raise DimensionError(f"bitmap must be a nonempty 2-D grid, got shape {grid.shape}")
        if grid.shape[0] > MAX_DIMENSION or grid.shape[1] > MAX_DIMENSION:
            raise DimensionError(f"bitmap shape {grid.shape} exceeds {MAX_DIMENSION}")
        if grid.size and grid.max() > 1:
            raise DimensionError("bitmap pixels must be 0 or 1")
        grid.setflags(write=False)
        return grid

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "Bitmap":
        """Build from rows like "00111100" (1 = black)"""
        return cls(pixels=[[int(ch) for ch in line] for line in lines])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bitmap):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    __hash__ = None


# Segmentation schemas
class ProjectionProfile(BaseModel):
    """Black pixels per row, P(1)..P(height)"""
    model_config = ConfigDict(frozen=True)

    values: Tuple[int, ...]

    def at(self, row: int) -> int:
        """P(row) with 1-based row"""
        return self.values[row - 1]

    def __len__(self) -> int:
        return len(self.values)


class LineBounds(BaseModel):
    model_config = ConfigDict(frozen=True)

    first_row: int = Field(..., ge=1, description="1-based first page row")
    last_row: int = Field(..., ge=1, description="1-based last page row, inclusive")

    @model_validator(mode="after")
    def _ordered(self) -> "LineBounds":
        if self.first_row > self.last_row:
            raise InvariantViolation(f"line bounds {self.first_row}..{self.last_row} inverted")
        return self

    @property
    def height(self) -> int:
        return self.last_row - self.first_row + 1

    def label(self) -> str:
        return f"{self.first_row}..{self.last_row}"


class PageSegmentation(BaseModel):
    model_config = ConfigDict(frozen=True)

    profile: ProjectionProfile
    lines: Tuple[LineBounds, ...]
    discarded: int = Field(0, ge=0, description="ink runs shorter than min_height")


# Feature schemas
class LineFeatures(BaseModel):
    """Peak heights plus length features of one compressed text line"""
    model_config = ConfigDict(frozen=True)

    h: int = Field(..., ge=1, description="line height m'")
    b: int = Field(..., ge=1, description="base height")
    a: int = Field(..., ge=1, description="ascender height")
    d: int = Field(..., ge=1, description="descender height")
    m1: int = Field(..., ge=1, description="x-height peak row")
    m2: int = Field(..., ge=1, description="baseline peak row")
    l: int = Field(..., ge=2, description="compressed length n'")
    r: int = Field(..., ge=1, description="uncompressed text extent")
    R: float = Field(..., gt=0, description="normalized length ratio l / r")

    @model_validator(mode="after")
    def _table2_identities(self) -> "LineFeatures":
        if not 1 <= self.m1 < self.m2 <= self.h:
            raise InvariantViolation(f"peaks m1={self.m1}, m2={self.m2} outside 1..{self.h}")
        if self.b != self.m2 - self.m1 or self.a != self.m2 or self.d != self.h - self.m1:
            raise InvariantViolation("features disagree with their peak rows")
        return self


class DensityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    line_density: float = Field(..., ge=0, le=1)
    base_density: float = Field(..., ge=0, le=1)
    ascender_density: float = Field(..., ge=0, le=1)
    descender_density: float = Field(..., ge=0, le=1)
    mhd: float = Field(..., ge=0, le=100, description="percentage")


# Classification schemas
class LineClassLabel(str, Enum):
    ASCENDER_RICH = "ascender_rich"
    ASCENDER_AND_DESCENDER_RICH = "ascender_and_descender_rich"
    UPPER_CASE = "upper_case"


class MhdThresholds(BaseModel):
    model_config = ConfigDict(frozen=True)

    low: float = Field(MHD_LOW, ge=0, le=100)
    high: float = Field(MHD_HIGH, ge=0, le=100)

    @model_validator(mode="after")
    def _ordered(self) -> "MhdThresholds":
        if self.low >= self.high:
            raise ValueError(f"mhd low {self.low} must be below high {self.high}")
        return self


class LineClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: LineClassLabel
    mhd: float


# Synthetic document schemas
class LineGeometry(BaseModel):
    model_config = ConfigDict(frozen=True)

    h: int = Field(..., ge=1)
    b: int = Field(..., ge=1)
    a: int = Field(..., ge=1)

    @property
    def d(self) -> int:
        return self.h - self.a + self.b


class GeometryTable(BaseModel):
    """Per font size line geometry in pixels"""
    model_config = ConfigDict(frozen=True)

    entries: Dict[int, LineGeometry]

    @model_validator(mode="after")
    def _consistent(self) -> "GeometryTable":
        previous_h = 0
        for size in sorted(self.entries):
            geometry = self.entries[size]
            if not (geometry.b < geometry.a <= geometry.h and geometry.d <= geometry.h):
                raise GeometryError(f"size {size}: inconsistent geometry {geometry}")
            if geometry.h <= previous_h:
                raise GeometryError(f"size {size}: line height must grow with size")
            previous_h = geometry.h
        return self

    def __getitem__(self, size: int) -> LineGeometry:
        try:
            return self.entries[size]
        except KeyError:
            raise GeometryError(f"font size {size} not in geometry table") from None

    def __contains__(self, size: object) -> bool:
        return size in self.entries

    @property
    def sizes(self) -> List[int]:
        return sorted(self.entries)


class LineSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    font_size: int = Field(..., ge=1)
    line_class: LineClassLabel
    fill_fraction: float = Field(1.0, gt=0, le=1)


class TruthLine(BaseModel):
    model_config = ConfigDict(frozen=True)

    first_row: int = Field(..., ge=1)
    last_row: int = Field(..., ge=1)
    font_size: int = Field(..., ge=1)
    line_class: LineClassLabel
    text_extent_r: int = Field(..., ge=1)

    @property
    def bounds(self) -> Tuple[int, int]:
        return self.first_row, self.last_row


class GroundTruth(BaseModel):
    model_config = ConfigDict(frozen=True)

    lines: Tuple[TruthLine, ...] = ()

    @model_validator(mode="after")
    def _disjoint_and_ordered(self) -> "GroundTruth":
        previous_last = 0
        for line in self.lines:
            if line.first_row <= previous_last or line.first_row > line.last_row:
                raise InvariantViolation(f"truth line {line.first_row}..{line.last_row} overlaps or is inverted")
            previous_last = line.last_row
        return self


# Regression schemas
class FeatureName(str, Enum):
    LINE_HEIGHT = "line_height"
    ASCENDER_HEIGHT = "ascender_height"
    BASE_HEIGHT = "base_height"


class TrainingSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    feature_name: FeatureName
    samples: Tuple[Tuple[int, float], ...]

    @field_validator("samples")
    @classmethod
    def _positive_values(cls, samples):
        for size, value in samples:
            if value <= 0:
                raise ValueError(f"feature value {value} for size {size} must be positive")
        return samples


class RegressionModel(BaseModel):
    """Fitted line y = p * font_size + q"""
    model_config = ConfigDict(frozen=True)

    feature_name: FeatureName
    p: float = Field(..., gt=0, description="pixels per point")
    q: float = Field(..., description="pixels")
    residual_norm: float = Field(..., ge=0)
    n_samples: int = Field(..., ge=2)


class FontSizeEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    raw_size: float
    snapped_size: int
    model_used: FeatureName
    line_class: Optional[LineClass] = None


# Detection schemas
class DetectorOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    candidates: Tuple[int, ...] = STANDARD_FONT_SIZES
    thresholds: MhdThresholds = MhdThresholds()
    min_height: int = Field(MIN_LINE_HEIGHT, ge=1)
    route_ascender_rich: bool = True
    short_line_deviation: float = Field(SHORT_LINE_DEVIATION, gt=0)

    @field_validator("candidates")
    @classmethod
    def _sorted_unique(cls, candidates):
        if not candidates:
            raise ValueError("candidate font sizes must not be empty")
        return tuple(sorted(set(candidates)))


class LineReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=1)
    bounds: LineBounds
    features: Optional[LineFeatures] = None
    densities: Optional[DensityReport] = None
    line_class: Optional[LineClass] = None
    estimate: Optional[FontSizeEstimate] = None
    R: Optional[float] = None
    flags: Tuple[str, ...] = ()
    error: Optional[str] = None


class SizeAccuracy(BaseModel):
    model_config = ConfigDict(frozen=True)

    font_size: int
    correct: int = Field(..., ge=0)
    total: int = Field(..., ge=0)

    @property
    def percentage(self) -> float:
        return 100.0 * self.correct / self.total if self.total else 0.0


class ScoreReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    per_size: Tuple[SizeAccuracy, ...]
    correct: int = Field(..., ge=0)
    total: int = Field(..., ge=0)
    unscored: int = Field(0, ge=0)

    @property
    def overall(self) -> float:
        return 100.0 * self.correct / self.total if self.total else 0.0


class DocumentReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    width: int
    height: int
    lines: Tuple[LineReport, ...] = ()
    discarded: int = 0


# Benchmark schemas
class BenchReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    width: int
    height: int
    pairs: int = Field(..., ge=0)
    run_visits: int = Field(..., ge=0)
    iterations: int = Field(..., ge=1)
    compressed_seconds: float = Field(..., ge=0, description="best compressed-domain VPP time")
    raster_seconds: float = Field(..., ge=0, description="best decode + row sum time")
    compression_ratio: float = Field(..., gt=0, description="pixels per stored run")
    byte_ratio: float = Field(..., gt=0, description="P4 bytes / RLD bytes")

    @property
    def speedup(self) -> float:
        return self.raster_seconds / self.compressed_seconds if self.compressed_seconds else float("inf")
