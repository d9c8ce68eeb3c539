"""
Unit tests for profiling and line segmentation
"""
import numpy as np
import pytest

from app.services.oracle_service import raster_segment, raster_vpp
from app.services.rle_service import decode, encode
from app.services.segmentation_service import (
    RunVisitCounter,
    extract_line,
    segment_lines,
    segment_page,
    vpp,
)
from schemas import Bitmap, CompressedImage, LineBounds, ProjectionProfile
from tests.conftest import corpus_specs


def _bounds(pairs):
    return [LineBounds(first_row=first, last_row=last) for first, last in pairs]


class TestVpp:

    def test_single_row(self):
        """Test a row's profile is the sum of its black runs"""
        img = CompressedImage(width=8, rows=(((2, 4), (2, 0)),))
        assert vpp(img).values == (4,)

    def test_all_white(self):
        """Test an all-white page profiles to zeros"""
        img = encode(Bitmap.from_strings(["00000"] * 4))
        assert vpp(img).values == (0, 0, 0, 0)

    def test_matches_raster_sums(self):
        """Test compressed profiling equals row sums of the decoded raster"""
        rng = np.random.default_rng(21)
        for _ in range(100):
            height, width = rng.integers(1, 40, size=2)
            img = encode(Bitmap(pixels=(rng.random((height, width)) < 0.3).astype(np.uint8)))
            assert vpp(img) == raster_vpp(decode(img))

    def test_visits_every_pair_once(self, tiny_bitmap):
        """Test the run-visit counter equals the stored pair count"""
        img = encode(tiny_bitmap)
        counter = RunVisitCounter()
        vpp(img, counter)
        assert counter.visits == img.pair_count == 5


class TestSegmentLines:

    def test_hand_example(self):
        """Test splitting at zero rows with min_height 1"""
        profile = ProjectionProfile(values=(0, 0, 5, 6, 0, 0, 3, 0))
        assert segment_lines(profile, min_height=1) == _bounds([(3, 4), (7, 7)])

    def test_specks_discarded(self):
        """Test short ink runs are dropped and counted"""
        profile = ProjectionProfile(values=(0, 0, 5, 6, 0, 0, 3, 0))
        assert segment_lines(profile, min_height=2) == _bounds([(3, 4)])

    def test_blank_profile(self):
        """Test an all-zero profile has no lines"""
        assert segment_lines(ProjectionProfile(values=(0, 0, 0))) == []

    def test_ink_to_page_edges(self):
        """Test runs touching the first and last rows are kept"""
        profile = ProjectionProfile(values=(1, 1, 1, 0, 2, 2, 2))
        assert segment_lines(profile) == _bounds([(1, 3), (5, 7)])

    def test_covers_inked_rows(self):
        """Test with min_height 1 the bounds cover exactly the inked rows"""
        rng = np.random.default_rng(8)
        values = tuple(int(v) for v in rng.integers(0, 3, size=200))
        covered = set()
        for bounds in segment_lines(ProjectionProfile(values=values), min_height=1):
            covered.update(range(bounds.first_row, bounds.last_row + 1))
        assert covered == {i for i, v in enumerate(values, start=1) if v > 0}


class TestSegmentPage:

    def test_generated_page_matches_truth(self, small_generator):
        """Test a generated page segments into exactly its ground truth lines"""
        for seed in range(5):
            bitmap, truth = small_generator.generate(corpus_specs(seed, count=10), seed=seed)
            segmentation = segment_page(encode(bitmap))
            assert [(b.first_row, b.last_row) for b in segmentation.lines] == [t.bounds for t in truth.lines]
            assert segmentation.discarded == 0

    def test_matches_raster_segmentation(self, small_generator):
        """Test bounds equal those found on the raster"""
        bitmap, _ = small_generator.generate(corpus_specs(3, count=8), seed=3)
        assert list(segment_page(encode(bitmap)).lines) == raster_segment(bitmap)

    def test_extract_line(self, mixed_page):
        """Test extracting a line returns just its rows"""
        page, truth = mixed_page
        first = truth.lines[0]
        line = extract_line(page, LineBounds(first_row=first.first_row, last_row=first.last_row))
        assert line.height == first.last_row - first.first_row + 1
        assert line.width == page.width
