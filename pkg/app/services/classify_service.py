"""
Classification service - MHD banding of mixed-case and upper-case text lines
"""
import logging
from typing import Optional

from schemas import LineClass, LineClassLabel, MhdThresholds

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLDS = MhdThresholds()


def classify_line(mhd: float, thresholds: Optional[MhdThresholds] = None) -> LineClass:
    """
    Band a line by its MHD percentage

    Bands are closed below and open above:
        mhd < low          -> ascender_and_descender_rich
        low <= mhd < high  -> ascender_rich
        mhd >= high        -> upper_case
    """
    bands = thresholds or DEFAULT_THRESHOLDS
    if mhd < bands.low:
        label = LineClassLabel.ASCENDER_AND_DESCENDER_RICH
    elif mhd < bands.high:
        label = LineClassLabel.ASCENDER_RICH
    else:
        label = LineClassLabel.UPPER_CASE
    return LineClass(label=label, mhd=mhd)
