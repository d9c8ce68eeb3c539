"""
Error hierarchy for rlfont

Every error carries the process exit code the CLI maps it to.
Domain errors do not derive from ValueError so that pydantic validators
let them through unchanged.
"""
from typing import Optional, Sequence, Tuple


class RlfontError(Exception):
    """Base class for all rlfont errors"""

    exit_code = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InputError(RlfontError):
    """Bad input data, files or arguments"""


class DimensionError(InputError):
    """Zero, negative or oversized image dimensions"""


class CorruptRowError(InputError):
    """A compressed row whose runs do not sum to the image width"""

    def __init__(self, row: int, total: int, width: int):
        super().__init__(f"row {row}: runs sum to {total}, expected width {width}")
        self.row = row


class BoundsError(InputError):
    """Row range outside the image"""


class FormatError(InputError):
    """Malformed file content at a known position"""

    position_label = "offset"

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{self.position_label} {position}: {message}"
        super().__init__(message)
        self.position = position


class PbmFormatError(FormatError):
    """Netpbm header or raster problem (position is a byte offset)"""


class RldocFormatError(FormatError):
    """RLD document problem (position is a byte offset)"""


class ModelFileError(FormatError):
    """Regression model file problem (position is a line number)"""

    position_label = "line"


class TruthFileError(FormatError):
    """Ground truth file problem (position is a line number)"""

    position_label = "line"


class LineSpecError(FormatError):
    """Synthetic line spec file problem (position is a line number)"""

    position_label = "line"


class ParameterError(InputError):
    """A service argument outside its allowed range"""


class DocumentIOError(InputError):
    """Reading or writing a document failed"""


class LayoutError(InputError):
    """Synthetic lines do not fit on the page"""


class GeometryError(InputError):
    """Font size missing from the geometry table or inconsistent geometry"""


class AlignmentError(InputError):
    """Detected lines and ground truth lines do not line up"""

    def __init__(self, unmatched: Sequence[Tuple[int, int]]):
        ranges = ", ".join(f"{first}..{last}" for first, last in unmatched)
        super().__init__(f"unmatched line bounds: {ranges}")
        self.unmatched = tuple(unmatched)


class FeatureError(RlfontError):
    """Per-line feature extraction failure"""


class DegenerateLineError(FeatureError):
    """Line too short for a differential profile"""


class PeakError(FeatureError):
    """No base band peaks in the differential profile"""


class InvertedPeaksError(FeatureError):
    """Baseline peak found above the x-height peak"""


class ExtentError(FeatureError):
    """Text extent r is not positive or too short for the line ink"""


class FitError(RlfontError):
    """Regression fitting failure"""


class SingularFitError(FitError):
    """All training samples share one font size"""


class InvariantViolation(RlfontError):
    """Internal invariant broken; indicates a bug rather than bad input"""

    exit_code = 2
