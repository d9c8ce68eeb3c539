"""
Detector service - per-line font size detection on a compressed page

Pipeline per segmented line:
    profile -> r, l, MHD -> class band -> features and densities
    -> line height or ascender height model on the measured height h -> snapped size
"""
import logging
import statistics
from collections import defaultdict
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from app.core.config import FORMAT_HEADER
from app.core.exceptions import AlignmentError, ExtentError, FeatureError, ModelFileError
from app.services.classify_service import classify_line
from app.services.feature_service import compressed_length, densities, extract_features, mhd, text_extent
from app.services.regression_service import ModelSet, predict_size
from app.services.segmentation_service import extract_line, segment_page, vpp
from schemas import (
    CompressedImage,
    DetectorOptions,
    DocumentReport,
    FeatureName,
    GroundTruth,
    LineBounds,
    LineClassLabel,
    LineReport,
    ScoreReport,
    SizeAccuracy,
)

logger = logging.getLogger(__name__)

UPPERCASE_UNSUPPORTED = "uppercase_unsupported"
SHORT_LINE_LOW_CONFIDENCE = "short_line_low_confidence"

_REQUIRED_MODELS = (FeatureName.LINE_HEIGHT, FeatureName.ASCENDER_HEIGHT)


class FontSizeDetector:
    """Detects the font size of every text line on a page"""

    def __init__(self, models: ModelSet, options: Optional[DetectorOptions] = None):
        missing = [feature.value for feature in _REQUIRED_MODELS if feature not in models]
        if missing:
            raise ModelFileError(f"models missing for {', '.join(missing)}")
        self.models = dict(models)
        self.options = options or DetectorOptions()

    def _model_for(self, label: LineClassLabel) -> FeatureName:
        if label == LineClassLabel.ASCENDER_RICH and self.options.route_ascender_rich:
            return FeatureName.ASCENDER_HEIGHT
        return FeatureName.LINE_HEIGHT

    def detect_line(self, page: CompressedImage, index: int, bounds: LineBounds) -> LineReport:
        """Classify one line and predict its size; feature failures are kept on the report"""
        line = extract_line(page, bounds)
        profile = vpp(line)
        r = text_extent(line)
        try:
            line_mhd = mhd(profile, r)
        except ExtentError as e:
            logger.warning(f"Line {bounds.label()}: {e.message}, no prediction")
            return LineReport(index=index, bounds=bounds, error=e.message)

        line_class = classify_line(line_mhd, self.options.thresholds)
        flags: Tuple[str, ...] = ()
        if line_class.label == LineClassLabel.UPPER_CASE:
            flags = (UPPERCASE_UNSUPPORTED,)

        features = None
        density = None
        error = None
        try:
            features = extract_features(line, profile)
            density = densities(line, features, profile)
        except FeatureError as e:
            error = e.message
            if line_class.label != LineClassLabel.UPPER_CASE:
                logger.warning(f"Line {bounds.label()}: {e.message}")

        model = self.models[self._model_for(line_class.label)]
        estimate = predict_size(model, float(len(profile)), self.options.candidates)
        return LineReport(
            index=index,
            bounds=bounds,
            features=features,
            densities=density,
            line_class=line_class,
            estimate=estimate.model_copy(update={"line_class": line_class}),
            R=compressed_length(line) / r,
            flags=flags,
            error=error,
        )

    def _flag_short_lines(self, lines: Sequence[LineReport]) -> List[LineReport]:
        ratios = [line.R for line in lines if line.R is not None]
        if len(ratios) < 2:
            return list(lines)
        median = statistics.median(ratios)
        flagged = []
        for line in lines:
            if line.R is not None and abs(line.R - median) > self.options.short_line_deviation * median:
                line = line.model_copy(update={"flags": line.flags + (SHORT_LINE_LOW_CONFIDENCE,)})
            flagged.append(line)
        return flagged

    def detect_document(self, page: CompressedImage) -> DocumentReport:
        """
        Segment a page and detect every line, in reading order

        Lines whose R deviates from the page median by more than
        short_line_deviation are flagged but still sized.
        """
        segmentation = segment_page(page, self.options.min_height)
        lines = [
            self.detect_line(page, index, bounds)
            for index, bounds in enumerate(segmentation.lines, start=1)
        ]
        lines = self._flag_short_lines(lines)
        logger.info(f"Detected {sum(line.estimate is not None for line in lines)}/{len(lines)} line sizes")
        return DocumentReport(
            width=page.width,
            height=page.height,
            lines=tuple(lines),
            discarded=segmentation.discarded,
        )

    def __call__(self, page: CompressedImage) -> DocumentReport:
        return self.detect_document(page)


def detect_document(
    page: CompressedImage,
    models: ModelSet,
    candidates: Optional[Sequence[int]] = None,
    options: Optional[DetectorOptions] = None,
) -> DocumentReport:
    options = options or DetectorOptions()
    if candidates is not None:
        options = options.model_copy(update={"candidates": tuple(sorted(set(candidates)))})
    return FontSizeDetector(models, options).detect_document(page)


def detect_pages(
    pages: Iterable[CompressedImage],
    detector: FontSizeDetector,
    mapper: Callable = map,
) -> List[DocumentReport]:
    """Reports for several pages in input order; mapper may run pages in parallel"""
    return list(mapper(detector, pages))


# Scoring
def score(report: DocumentReport, truth: GroundTruth) -> ScoreReport:
    """
    Snapped-size accuracy per true font size

    Lines align by exact row range. Upper-case lines are not scored and
    lines without an estimate count as wrong.
    """
    detected = {(line.bounds.first_row, line.bounds.last_row): line for line in report.lines}
    expected = {line.bounds: line for line in truth.lines}
    unmatched = sorted(set(detected) ^ set(expected))
    if unmatched:
        raise AlignmentError(unmatched)

    correct: Dict[int, int] = defaultdict(int)
    total: Dict[int, int] = defaultdict(int)
    unscored = 0
    for bounds, truth_line in expected.items():
        if truth_line.line_class == LineClassLabel.UPPER_CASE:
            unscored += 1
            continue
        estimate = detected[bounds].estimate
        total[truth_line.font_size] += 1
        if estimate is not None and estimate.snapped_size == truth_line.font_size:
            correct[truth_line.font_size] += 1

    per_size = tuple(
        SizeAccuracy(font_size=size, correct=correct[size], total=total[size]) for size in sorted(total)
    )
    return ScoreReport(
        per_size=per_size,
        correct=sum(correct.values()),
        total=sum(total.values()),
        unscored=unscored,
    )


def combine_scores(scores: Iterable[ScoreReport]) -> ScoreReport:
    correct: Dict[int, int] = defaultdict(int)
    total: Dict[int, int] = defaultdict(int)
    unscored = 0
    for item in scores:
        unscored += item.unscored
        for accuracy in item.per_size:
            correct[accuracy.font_size] += accuracy.correct
            total[accuracy.font_size] += accuracy.total
    per_size = tuple(
        SizeAccuracy(font_size=size, correct=correct[size], total=total[size]) for size in sorted(total)
    )
    return ScoreReport(per_size=per_size, correct=sum(correct.values()), total=sum(total.values()), unscored=unscored)


# Renderers
def _value(value, fmt: str = "") -> str:
    return "-" if value is None else format(value, fmt)


def render_tsv(report: DocumentReport) -> str:
    """One tab-separated row per line; '-' where a value is unavailable"""
    header = "line\trows\th\tb\ta\td\tl\tr\tR\tmhd\tclass\tmodel\traw\tsize\tflags"
    rows = [FORMAT_HEADER, f"# page {report.width}x{report.height} lines={len(report.lines)} discarded={report.discarded}", header]
    for line in report.lines:
        feats = line.features
        cls = line.line_class
        estimate = line.estimate
        rows.append(
            "\t".join(
                [
                    str(line.index),
                    line.bounds.label(),
                    str(line.bounds.height),
                    _value(feats and feats.b),
                    _value(feats and feats.a),
                    _value(feats and feats.d),
                    _value(feats and feats.l),
                    _value(feats and feats.r),
                    _value(line.R, ".4f"),
                    _value(cls and cls.mhd, ".2f"),
                    cls.label.value if cls else "-",
                    estimate.model_used.value if estimate else "-",
                    _value(estimate and estimate.raw_size, ".3f"),
                    _value(estimate and estimate.snapped_size),
                    ",".join(line.flags) or "-",
                ]
            )
        )
        if line.error:
            rows.append(f"# line {line.index}: {line.error}")
    return "\n".join(rows) + "\n"


def render_regions(report: DocumentReport) -> str:
    """Two columns: text region and its font size"""
    rows = [FORMAT_HEADER, f"{'Text region':<20}Font Size"]
    for line in report.lines:
        size = str(line.estimate.snapped_size) if line.estimate else "?"
        marks = f"  ({', '.join(line.flags)})" if line.flags else ""
        rows.append(f"{'rows ' + line.bounds.label():<20}{size}{marks}")
    return "\n".join(rows) + "\n"


def render_score(result: ScoreReport) -> str:
    """Accuracy table per font size with the overall row"""
    rows = [FORMAT_HEADER, f"{'Font size':<12}{'Correct':>8}{'Total':>8}{'Accuracy (%)':>14}"]
    for accuracy in result.per_size:
        rows.append(f"{accuracy.font_size:<12}{accuracy.correct:>8}{accuracy.total:>8}{accuracy.percentage:>14.2f}")
    rows.append(f"{'Overall':<12}{result.correct:>8}{result.total:>8}{result.overall:>14.2f}")
    if result.unscored:
        rows.append(f"# {result.unscored} upper-case lines not scored")
    return "\n".join(rows) + "\n"
