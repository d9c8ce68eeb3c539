"""
Feature service - per-line features computed from compressed text lines

All row indices handled here are 1-based, as in the formulas:
    h = m', b = m2 - m1, a = m2, d = m' - m1
    r = sum(row 1 runs) - (min leading white + max trailing white)
    R = l / r, with l = 2 * pairs in the widest row
    MHD = 100 * (P(1) + P(m')) / (2 r)
"""
import logging
from typing import List, Optional, Sequence, Tuple

from app.core.exceptions import DegenerateLineError, ExtentError, InvertedPeaksError, PeakError
from app.services.segmentation_service import vpp
from schemas import CompressedImage, DensityReport, LineFeatures, ProjectionProfile, RunPair

logger = logging.getLogger(__name__)


def differential_profile(profile: ProjectionProfile, closed: bool = False) -> List[int]:
    """
    P'(i) = P(i+1) - P(i)

    Args:
        profile: Line profile of height m' >= 2
        closed: Also emit P'(m') = -P(m'), treating the white row below the
            line as P(m'+1) = 0

    Returns:
        m'-1 differences, or m' when closed
    """
    values = profile.values
    if len(values) < 2:
        raise DegenerateLineError(f"line height {len(values)} too small for a differential profile")
    diffs = [values[i + 1] - values[i] for i in range(len(values) - 1)]
    if closed:
        diffs.append(-values[-1])
    return diffs


def find_peaks(dp: Sequence[int]) -> Tuple[int, int]:
    """
    Locate the positive maximum (m1) and negative minimum (m2) of a differential profile

    Ties go to the first maximum and the last minimum, which gives the widest base band.
    """
    if not dp:
        raise PeakError("empty differential profile")
    top = max(dp)
    bottom = min(dp)
    if top <= 0 or bottom >= 0:
        raise PeakError(f"no base band detected (max {top}, min {bottom})")
    m1 = dp.index(top) + 1
    m2 = len(dp) - list(reversed(dp)).index(bottom)
    if m2 <= m1:
        raise InvertedPeaksError(f"baseline peak at row {m2} is not below x-height peak at row {m1}")
    return m1, m2


def _unpadded(row: Sequence[RunPair]) -> Sequence[RunPair]:
    """Row without its (0,0) padding pairs at either end"""
    start, end = 0, len(row)
    while start < end and row[start] == (0, 0):
        start += 1
    while end > start and row[end - 1] == (0, 0):
        end -= 1
    return row[start:end]


def _trailing_white(row: Sequence[RunPair]) -> int:
    white, black = row[-1]
    return white if black == 0 else 0


def text_extent(line: CompressedImage, symmetric: bool = False) -> int:
    """
    Original text line length r from run data

    The line total (row 1) minus the smallest leading white and the largest
    trailing white over all rows. symmetric=True takes the smallest trailing
    white instead, which equals the true ink extent for ragged right edges.
    """
    total = sum(white + black for white, black in line.rows[0])
    rows = [_unpadded(row) for row in line.rows]
    leading = min(row[0].white for row in rows)
    trailing_whites = [_trailing_white(row) for row in rows]
    trailing = min(trailing_whites) if symmetric else max(trailing_whites)
    return total - (leading + trailing)


def compressed_length(line: CompressedImage) -> int:
    """l = n', the run column count of the widest row, padding excluded"""
    return 2 * max(len(_unpadded(row)) for row in line.rows)


def mhd(profile: ProjectionProfile, r: int) -> float:
    """Mean of the top and bottom row ink as a percentage of the text extent"""
    if r <= 0:
        raise ExtentError(f"text extent r={r} must be positive")
    values = profile.values
    if values[0] + values[-1] > 2 * r:
        raise ExtentError(f"row ink exceeds text extent r={r}, MHD would pass 100")
    return 100.0 * (values[0] + values[-1]) / (2 * r)


def extract_features(line: CompressedImage, profile: Optional[ProjectionProfile] = None) -> LineFeatures:
    """
    Compute h, b, a, d, m1, m2, l, r and R for one compressed text line

    Args:
        line: Compressed text line (rows of one segmented line)
        profile: Precomputed profile of the line, if any

    Returns:
        LineFeatures
    """
    if profile is None:
        profile = vpp(line)
    height = len(profile)
    if height < 2:
        raise DegenerateLineError(f"line height {height} too small for a differential profile")

    r = text_extent(line)
    if r <= 0:
        raise ExtentError(f"text extent r={r} must be positive (blank or malformed line)")

    m1, m2 = find_peaks(differential_profile(profile, closed=True))
    length = compressed_length(line)
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


def densities(line: CompressedImage, feats: LineFeatures, profile: Optional[ProjectionProfile] = None) -> DensityReport:
    """
    Line, base, ascender and descender ink densities plus MHD

    The base and descender sums start at row m1 + 1: P'(m1) is the step
    from row m1 into the band, so the band holds exactly b (resp. d) rows.
    """
    if profile is None:
        profile = vpp(line)
    values = profile.values
    h, r, m1, m2 = feats.h, feats.r, feats.m1, feats.m2

    line_ink = sum(values)
    base_ink = sum(values[m1:m2])
    ascender_ink = sum(values[:m2])
    descender_ink = sum(values[m1:h])

    bands = {
        "line": (line_ink, h),
        "base": (base_ink, feats.b),
        "ascender": (ascender_ink, feats.a),
        "descender": (descender_ink, feats.d),
    }
    for name, (ink, rows) in bands.items():
        if ink > rows * r:
            raise ExtentError(f"{name} ink {ink} exceeds {rows} rows of text extent r={r}")

    return DensityReport(
        line_density=line_ink / (h * r),
        base_density=base_ink / (feats.b * r),
        ascender_density=ascender_ink / (feats.a * r),
        descender_density=descender_ink / (feats.d * r),
        mhd=mhd(profile, r),
    )
