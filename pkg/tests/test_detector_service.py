"""
Unit tests for document detection, scoring and report rendering
"""
import pytest

from app.core.exceptions import AlignmentError, ModelFileError
from app.services.detector_service import (
    SHORT_LINE_LOW_CONFIDENCE,
    UPPERCASE_UNSUPPORTED,
    FontSizeDetector,
    combine_scores,
    detect_document,
    detect_pages,
    render_regions,
    render_score,
    render_tsv,
    score,
)
from app.services.regression_service import predict_size
from app.services.rle_service import encode
from schemas import (
    Bitmap,
    DetectorOptions,
    DocumentReport,
    FeatureName,
    GroundTruth,
    LineBounds,
    LineClassLabel,
    LineReport,
    LineSpec,
    TruthLine,
)
from tests.conftest import corpus_specs


class TestDetectDocument:

    def test_mixed_page_all_correct(self, mixed_page, models):
        """Test every mixed-case line of every standard size is sized correctly"""
        page, truth = mixed_page
        report = detect_document(page, models)
        result = score(report, truth)
        assert result.overall == 100.0
        assert result.total == 14

    def test_routing(self, mixed_page, models):
        """Test ascender-rich lines use the ascender model and the rest the line model"""
        page, truth = mixed_page
        report = detect_document(page, models)
        for line, truth_line in zip(report.lines, truth.lines):
            expected = (
                FeatureName.ASCENDER_HEIGHT
                if truth_line.line_class == LineClassLabel.ASCENDER_RICH
                else FeatureName.LINE_HEIGHT
            )
            assert line.line_class.label == truth_line.line_class
            assert line.estimate.model_used == expected
            assert line.estimate.line_class == line.line_class

    def test_line_height_only_undersizes(self, small_generator, models):
        """Test sizing ascender-rich lines by line height scores lower"""
        specs = [LineSpec(font_size=size, line_class=LineClassLabel.ASCENDER_RICH) for size in (10, 12, 14, 16, 18, 20)]
        bitmap, truth = small_generator.generate(specs, seed=5)
        page = encode(bitmap)
        routed = score(detect_document(page, models), truth)
        ablated = score(detect_document(page, models, options=DetectorOptions(route_ascender_rich=False)), truth)
        assert routed.overall == 100.0
        assert ablated.overall < routed.overall
        for line in detect_document(page, models, options=DetectorOptions(route_ascender_rich=False)).lines:
            assert line.estimate.raw_size < truth.lines[line.index - 1].font_size

    def test_uppercase_flagged(self, small_generator, models):
        """Test upper-case lines get a best-effort size and a flag"""
        specs = [LineSpec(font_size=12, line_class=LineClassLabel.UPPER_CASE)]
        bitmap, truth = small_generator.generate(specs, seed=0)
        report = detect_document(encode(bitmap), models)
        line = report.lines[0]
        assert UPPERCASE_UNSUPPORTED in line.flags
        assert line.estimate.model_used == FeatureName.LINE_HEIGHT
        assert line.features is None and line.error
        result = score(report, truth)
        assert (result.total, result.unscored) == (0, 1)

    def test_blank_page(self, models):
        """Test a blank page gives an empty report"""
        page = encode(Bitmap.from_strings(["0" * 20] * 10))
        report = detect_document(page, models)
        assert report.lines == ()
        assert (report.width, report.height) == (20, 10)

    def test_ink_wider_than_extent(self, models):
        """Test a line whose ink overruns r is reported without a prediction"""
        page = encode(Bitmap.from_strings(["0" * 20, "1" * 5 + "0" * 15, "1" * 5 + "0" * 15, "0" * 5 + "1" * 15, "0" * 20]))
        report = detect_document(page, models)
        (line,) = report.lines
        assert line.estimate is None and line.line_class is None
        assert "exceeds text extent" in line.error

    def test_candidates_override(self, mixed_page, models):
        """Test snapping uses the given candidate sizes"""
        page, _ = mixed_page
        report = detect_document(page, models, candidates=(9, 13))
        assert {line.estimate.snapped_size for line in report.lines} <= {9, 13}

    def test_requires_both_models(self, models):
        """Test detection needs the line and ascender height models"""
        with pytest.raises(ModelFileError):
            FontSizeDetector({FeatureName.LINE_HEIGHT: models[FeatureName.LINE_HEIGHT]})

    def test_deterministic(self, mixed_page, models):
        """Test identical input renders identical reports"""
        page, _ = mixed_page
        assert render_tsv(detect_document(page, models)) == render_tsv(detect_document(page, models))

    def test_pages_keep_order(self, small_generator, models):
        """Test multi-page detection returns reports in input order"""
        pages = []
        for seed in range(3):
            bitmap, _ = small_generator.generate(corpus_specs(seed, count=3 + seed), seed)
            pages.append(encode(bitmap))
        reports = detect_pages(pages, FontSizeDetector(models))
        assert [len(report.lines) for report in reports] == [3, 4, 5]


class TestShortLines:

    def _report(self, index, ratio):
        return LineReport(index=index, bounds=LineBounds(first_row=index * 10, last_row=index * 10 + 5), R=ratio)

    def test_outlier_flagged(self, models):
        """Test a line whose R strays from the page median is flagged"""
        detector = FontSizeDetector(models)
        lines = [self._report(i, r) for i, r in enumerate((0.1, 0.11, 0.1, 0.3), start=1)]
        flagged = detector._flag_short_lines(lines)
        assert [SHORT_LINE_LOW_CONFIDENCE in line.flags for line in flagged] == [False, False, False, True]

    def test_single_line_not_flagged(self, models):
        """Test one line has nothing to compare against"""
        flagged = FontSizeDetector(models)._flag_short_lines([self._report(1, 0.5)])
        assert flagged[0].flags == ()


class TestScore:

    def _truth(self, sizes):
        return GroundTruth(
            lines=tuple(
                TruthLine(
                    first_row=k * 10 + 1,
                    last_row=k * 10 + 5,
                    font_size=size,
                    line_class=LineClassLabel.ASCENDER_AND_DESCENDER_RICH,
                    text_extent_r=100,
                )
                for k, size in enumerate(sizes)
            )
        )

    def _report(self, truth, sizes, models):
        lines = []
        for k, (truth_line, size) in enumerate(zip(truth.lines, sizes), start=1):
            estimate = predict_size(models[FeatureName.LINE_HEIGHT], 0.0, (size,))
            lines.append(
                LineReport(
                    index=k,
                    bounds=LineBounds(first_row=truth_line.first_row, last_row=truth_line.last_row),
                    estimate=estimate,
                )
            )
        return DocumentReport(width=100, height=2000, lines=tuple(lines))

    def test_all_correct(self, models):
        """Test a perfect report scores 100 per size"""
        sizes = [8, 10, 12] * 3
        truth = self._truth(sizes)
        result = score(self._report(truth, sizes, models), truth)
        assert all(accuracy.percentage == 100.0 for accuracy in result.per_size)
        assert result.overall == 100.0

    def test_one_wrong_in_hundred(self, models):
        """Test one bad label of 100 gives 99 overall"""
        sizes = [12] * 100
        truth = self._truth(sizes)
        result = score(self._report(truth, [12] * 99 + [14], models), truth)
        assert result.overall == pytest.approx(99.0)

    def test_misaligned(self, models):
        """Test lines that do not line up are listed"""
        truth = self._truth([8, 10])
        report = self._report(self._truth([8]), [8], models)
        with pytest.raises(AlignmentError) as exc:
            score(report, truth)
        assert exc.value.unmatched == ((11, 15),)

    def test_combine(self, models):
        """Test scores add up across pages"""
        truth = self._truth([8, 10])
        first = score(self._report(truth, [8, 10], models), truth)
        second = score(self._report(truth, [8, 12], models), truth)
        combined = combine_scores([first, second])
        assert (combined.correct, combined.total) == (3, 4)


class TestRenderers:

    def test_tsv(self, mixed_page, models):
        """Test the TSV report has a header and one row per line"""
        page, truth = mixed_page
        text = render_tsv(detect_document(page, models))
        rows = text.splitlines()
        assert rows[0] == "# rlfont v1"
        assert rows[2].split("\t")[0] == "line"
        assert len(rows) == 3 + len(truth.lines)
        assert rows[3].split("\t")[1] == f"{truth.lines[0].first_row}..{truth.lines[0].last_row}"

    def test_regions(self, mixed_page, models):
        """Test the region table lists a size per line"""
        page, truth = mixed_page
        rows = render_regions(detect_document(page, models)).splitlines()
        assert rows[1].startswith("Text region")
        assert rows[2].split()[2] == str(truth.lines[0].font_size)

    def test_score_table(self, mixed_page, models):
        """Test the accuracy table ends with the overall row"""
        page, truth = mixed_page
        rows = render_score(score(detect_document(page, models), truth)).splitlines()
        assert rows[-1].split() == ["Overall", "14", "14", "100.00"]
