"""
Core configuration for rlfont
All defaults live here; per-run overrides come from CLI flags only.
"""

# App Configuration
APP_TITLE = "rlfont - font size detection from run-length compressed documents"
APP_DESCRIPTION = "Learns and detects per-line font size straight from RLE data"
APP_VERSION = "1.0.0"

# Every text output starts with this line so scripts can pin the format
FORMAT_HEADER = "# rlfont v1"

# Image limits
MAX_DIMENSION = 2**31 - 1
MAX_RUN_LENGTH = 2**32 - 1

# Segmentation Configuration
MIN_LINE_HEIGHT = 3  # rows; shorter ink runs are treated as specks

# Classification Configuration (MHD percentages)
MHD_LOW = 7.0
MHD_HIGH = 25.0

# Detection Configuration
STANDARD_FONT_SIZES = (8, 10, 12, 14, 16, 18, 20)
SHORT_LINE_DEVIATION = 0.5  # relative deviation of R from the page median

# Training features measured on 7 Arial documents at 300 dpi, (low, high) pixels
TRAINING_FEATURE_RANGES = {
    8: {"height": (32, 33), "base": (19, 20), "ascender": (26, 27), "descender": (26, 27)},
    10: {"height": (42, 42), "base": (22, 23), "ascender": (32, 33), "descender": (32, 33)},
    12: {"height": (48, 49), "base": (29, 30), "ascender": (38, 39), "descender": (38, 39)},
    14: {"height": (57, 58), "base": (32, 33), "ascender": (44, 45), "descender": (44, 45)},
    16: {"height": (60, 61), "base": (35, 36), "ascender": (48, 49), "descender": (48, 49)},
    18: {"height": (69, 71), "base": (41, 42), "ascender": (54, 55), "descender": (57, 58)},
    20: {"height": (79, 80), "base": (48, 48), "ascender": (63, 64), "descender": (63, 64)},
}

# Synthetic page Configuration
PAGE_WIDTH = 2375
PAGE_HEIGHT = 3200
PAGE_MARGIN = 100
LINE_GAP = 24

# Glyph layout for synthetic lines (pixels unless noted)
GLYPH_GAP_RANGE = (2, 6)            # intra-word gap for upper-case lines
WORD_LENGTH_RANGE = (2, 6)          # glyphs per word
ASCENDER_PROBABILITY = 0.25         # share of glyphs carrying an ascender stroke
DESCENDER_PROBABILITY = 0.15        # share of glyphs carrying a descender stroke
MIN_GLYPH_WIDTH = 4
MAX_GLYPH_WIDTH = 20

# Benchmark Configuration
BENCH_ITERATIONS = 10
