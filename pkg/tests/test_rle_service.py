"""
Unit tests for the run-length service
"""
import numpy as np
import pytest

from app.core.exceptions import BoundsError, CorruptRowError, DimensionError
from app.services.rle_service import as_matrix, decode, encode, encode_row, extract_rows, run_counts
from schemas import Bitmap, CompressedImage, RunPair


class TestEncode:

    def test_encode_row_with_trailing_white(self):
        """Test a row ending on white gets a (white, 0) pair"""
        row = np.array([0, 0, 1, 1, 1, 1, 0, 0], dtype=np.uint8)
        assert encode_row(row) == (RunPair(2, 4), RunPair(2, 0))

    def test_encode_row_ending_black(self):
        """Test a row ending on black has no trailing pair"""
        row = np.array([1, 1, 0, 1], dtype=np.uint8)
        assert encode_row(row) == (RunPair(0, 2), RunPair(1, 1))

    def test_encode_all_white(self):
        """Test all-white rows encode as one (width, 0) pair"""
        img = encode(Bitmap.from_strings(["0000"] * 3))
        assert img.rows == ((RunPair(4, 0),),) * 3

    def test_encode_empty_bitmap(self):
        """Test zero-sized bitmaps are rejected"""
        with pytest.raises(DimensionError):
            encode(Bitmap(pixels=np.zeros((0, 4), dtype=np.uint8)))

    def test_random_round_trip(self):
        """Test random bitmaps survive encode then decode"""
        rng = np.random.default_rng(3)
        for density in (0.05, 0.5, 0.95):
            bitmap = Bitmap(pixels=(rng.random((64, 64)) < density).astype(np.uint8))
            img = encode(bitmap)
            assert decode(img) == bitmap
            assert all(sum(w + b for w, b in row) == 64 for row in img.rows)


class TestDecode:

    def test_decode_example(self):
        """Test decoding a single row"""
        img = CompressedImage(width=8, rows=(((2, 4), (2, 0)),))
        assert decode(img) == Bitmap.from_strings(["00111100"])

    def test_corrupt_row_names_row(self):
        """Test a row summing to the wrong width is rejected with its 1-based index"""
        with pytest.raises(CorruptRowError) as exc:
            CompressedImage(width=8, rows=(((8, 0),), ((2, 4), (1, 0))))
        assert exc.value.row == 2

    def test_empty_rows(self):
        """Test an image without rows is rejected"""
        with pytest.raises(DimensionError):
            decode(CompressedImage.model_construct(width=8, rows=()))


class TestExtractRows:

    @pytest.fixture
    def ten_rows(self):
        rng = np.random.default_rng(11)
        return encode(Bitmap(pixels=(rng.random((10, 16)) < 0.3).astype(np.uint8)))

    def test_identity_slice(self, ten_rows):
        """Test extracting every row gives an equal image"""
        assert extract_rows(ten_rows, 1, 10) == ten_rows

    def test_middle_slice(self, ten_rows):
        """Test rows 3..5 give a 3-row image"""
        part = extract_rows(ten_rows, 3, 5)
        assert part.height == 3
        assert part.rows == ten_rows.rows[2:5]

    @pytest.mark.parametrize("first,last", [(0, 3), (4, 11), (5, 4)])
    def test_out_of_range(self, ten_rows, first, last):
        """Test invalid ranges raise a bounds error"""
        with pytest.raises(BoundsError):
            extract_rows(ten_rows, first, last)


class TestMatrixView:

    def test_padding(self, tiny_bitmap):
        """Test ragged rows are padded with (0, 0) pairs"""
        img = encode(tiny_bitmap)
        matrix = as_matrix(img)
        assert matrix.shape == (3, 2, 2)
        assert matrix[1].tolist() == [[10, 0], [0, 0]]
        assert run_counts(img) == [2, 1, 2]
        assert img.pair_count == 5


def _naive_pairs(row) -> int:
    # white sentinel before the row, black after it
    pixels = [0] + [int(p) for p in row] + [1]
    transitions = sum(1 for left, right in zip(pixels, pixels[1:]) if left != right)
    return (transitions + 1) // 2


class TestRunCounts:

    def test_matches_transition_count(self):
        """Test pairs per row equal half the colour transitions, rounded up"""
        rng = np.random.default_rng(5)
        for _ in range(200):
            height, width = rng.integers(1, 30, size=2)
            pixels = (rng.random((height, width)) < rng.uniform(0.1, 0.9)).astype(np.uint8)
            pixels[0, 0] = 1
            pixels[-1, -1] = 1
            img = encode(Bitmap(pixels=pixels))
            assert run_counts(img) == [_naive_pairs(row) for row in pixels]

    def test_edge_rows(self):
        """Test rows that start or end with ink and blank rows"""
        bitmap = Bitmap.from_strings(["1100", "0011", "1001", "0000", "1111"])
        assert run_counts(encode(bitmap)) == [2, 1, 2, 1, 1]
        assert [_naive_pairs(row) for row in bitmap.pixels] == [2, 1, 2, 1, 1]
