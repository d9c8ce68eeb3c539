"""
Shared fixtures: small bitmaps, synthetic pages and the reference models
"""
from pathlib import Path
from typing import List

import numpy as np
import pytest

from app.core.config import STANDARD_FONT_SIZES
from app.services.regression_service import reference_models
from app.services.rle_service import encode
from app.services.synthgen_service import SyntheticPageGenerator
from schemas import Bitmap, LineClassLabel, LineSpec

DATA_DIR = Path(__file__).parent / "data"

MIXED_CLASSES = (LineClassLabel.ASCENDER_AND_DESCENDER_RICH, LineClassLabel.ASCENDER_RICH)
ALL_CLASSES = MIXED_CLASSES + (LineClassLabel.UPPER_CASE,)


def corpus_specs(seed: int, count: int = 14, classes=ALL_CLASSES, sizes=STANDARD_FONT_SIZES) -> List[LineSpec]:
    """Line specs cycling through sizes and classes with seeded fill fractions"""
    rng = np.random.default_rng(seed)
    return [
        LineSpec(
            font_size=sizes[k % len(sizes)],
            line_class=classes[(k // len(sizes) + seed) % len(classes)],
            fill_fraction=float(rng.uniform(0.6, 1.0)),
        )
        for k in range(count)
    ]


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def tiny_bitmap():
    """10x3 page matching the golden files in tests/data"""
    return Bitmap.from_strings(["0011100000", "0000000000", "1100000011"])


@pytest.fixture
def small_generator():
    """Narrow pages keep generation and encoding fast"""
    return SyntheticPageGenerator(page_width=800, page_height=1400, margins=20, gap=10)


@pytest.fixture
def models():
    return reference_models()


@pytest.fixture
def mixed_page(small_generator):
    """Both-rich and ascender-rich lines of every standard size"""
    specs = [
        LineSpec(font_size=size, line_class=line_class, fill_fraction=0.9)
        for line_class in MIXED_CLASSES
        for size in STANDARD_FONT_SIZES
    ]
    bitmap, truth = small_generator.generate(specs, seed=7)
    return encode(bitmap), truth
