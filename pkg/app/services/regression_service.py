"""
Regression service - least-squares font size lines, model files and size prediction
"""
import logging
import math
import re
from collections import defaultdict
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

from app.core.config import FORMAT_HEADER, MIN_LINE_HEIGHT, TRAINING_FEATURE_RANGES
from app.core.exceptions import (
    DocumentIOError,
    FeatureError,
    FitError,
    ModelFileError,
    ParameterError,
    SingularFitError,
)
from app.services.feature_service import extract_features
from app.services.segmentation_service import extract_line, segment_page
from schemas import (
    CompressedImage,
    FeatureName,
    FontSizeEstimate,
    GroundTruth,
    LineClassLabel,
    RegressionModel,
    TrainingSet,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
ModelSet = Dict[FeatureName, RegressionModel]

# Measured range column carrying each regression feature
_RANGE_COLUMNS = {
    FeatureName.LINE_HEIGHT: "height",
    FeatureName.ASCENDER_HEIGHT: "ascender",
    FeatureName.BASE_HEIGHT: "base",
}

_MODEL_LINE = re.compile(
    r"^feature=(?P<name>\S+)\s+p=(?P<p>\S+)\s+q=(?P<q>\S+)\s+resid=(?P<resid>\S+)\s+n=(?P<n>\S+)$"
)


def reference_training_sets() -> Dict[FeatureName, TrainingSet]:
    """Training sets built from the midpoints of the measured feature ranges"""
    sets = {}
    for feature, column in _RANGE_COLUMNS.items():
        samples = tuple(
            (size, (ranges[column][0] + ranges[column][1]) / 2)
            for size, ranges in sorted(TRAINING_FEATURE_RANGES.items())
        )
        sets[feature] = TrainingSet(feature_name=feature, samples=samples)
    return sets


def fit(ts: TrainingSet) -> RegressionModel:
    """
    Ordinary least squares of feature height (y) on font size (x)

    Returns:
        RegressionModel with y = p * x + q and the residual 2-norm
    """
    sizes = np.array([size for size, _ in ts.samples], dtype=float)
    values = np.array([value for _, value in ts.samples], dtype=float)
    if len(np.unique(sizes)) < 2:
        raise SingularFitError(f"{ts.feature_name.value}: need at least 2 distinct font sizes")

    design = np.column_stack((sizes, np.ones_like(sizes)))
    solution, _, _, _ = np.linalg.lstsq(design, values, rcond=None)
    p, q = float(solution[0]), float(solution[1])
    if p <= 0:
        raise FitError(f"{ts.feature_name.value}: slope {p:.4f} is not positive")

    residuals = values - (p * sizes + q)
    model = RegressionModel(
        feature_name=ts.feature_name,
        p=p,
        q=q,
        residual_norm=float(np.linalg.norm(residuals)),
        n_samples=len(ts.samples),
    )
    logger.info(f"Fitted {model.feature_name.value}: y = {p:.4f} x + {q:.4f} (resid {model.residual_norm:.4f})")
    return model


def reference_models() -> ModelSet:
    return {feature: fit(ts) for feature, ts in reference_training_sets().items()}


def snap(raw: float, candidates: Sequence[int]) -> int:
    """Nearest candidate size; ties go to the smaller candidate"""
    best = None
    for candidate in sorted(candidates):
        if best is None or abs(candidate - raw) < abs(best - raw):
            best = candidate
    if best is None:
        raise ParameterError("candidate font sizes must not be empty")
    return best


def predict_size(model: RegressionModel, feature_value: float, candidates: Sequence[int]) -> FontSizeEstimate:
    """Invert y = p x + q at the measured feature and snap to a candidate size"""
    raw = (feature_value - model.q) / model.p
    return FontSizeEstimate(raw_size=raw, snapped_size=snap(raw, candidates), model_used=model.feature_name)


def snapping_collisions(
    model: RegressionModel,
    values_by_size: Mapping[int, float],
    candidates: Sequence[int],
) -> List[Tuple[int, ...]]:
    """
    Groups of true sizes whose feature values snap to the same candidate

    Args:
        model: Fitted model used for prediction
        values_by_size: Measured feature value per true font size
        candidates: Snapping set

    Returns:
        Sorted tuples of true sizes sharing a snapped size (groups of 2 or more)
    """
    groups: Dict[int, List[int]] = defaultdict(list)
    for size, value in sorted(values_by_size.items()):
        groups[predict_size(model, value, candidates).snapped_size].append(size)
    return [tuple(sizes) for _, sizes in sorted(groups.items()) if len(sizes) > 1]


def page_training_samples(
    page: CompressedImage,
    truth: GroundTruth,
    min_height: int = MIN_LINE_HEIGHT,
) -> List[Tuple[FeatureName, int, float]]:
    """
    Feature samples of one segmented page aligned with its ground truth

    Both-rich lines feed line height, ascender height and base height; ascender-rich
    lines feed ascender height (their measured height) and base height; upper-case
    lines are skipped.
    """
    samples: List[Tuple[FeatureName, int, float]] = []
    segmentation = segment_page(page, min_height)
    truth_by_rows = {line.bounds: line for line in truth.lines}
    for bounds in segmentation.lines:
        truth_line = truth_by_rows.get((bounds.first_row, bounds.last_row))
        if truth_line is None:
            logger.warning(f"Line {bounds.label()} has no ground truth, skipping")
            continue
        if truth_line.line_class == LineClassLabel.UPPER_CASE:
            continue
        try:
            feats = extract_features(extract_line(page, bounds))
        except FeatureError as e:
            logger.warning(f"Line {bounds.label()}: {e.message}, skipping")
            continue

        size = truth_line.font_size
        if truth_line.line_class == LineClassLabel.ASCENDER_AND_DESCENDER_RICH:
            samples.append((FeatureName.LINE_HEIGHT, size, float(feats.h)))
            samples.append((FeatureName.ASCENDER_HEIGHT, size, float(feats.a)))
        else:
            samples.append((FeatureName.ASCENDER_HEIGHT, size, float(feats.h)))
        samples.append((FeatureName.BASE_HEIGHT, size, float(feats.b)))
    return samples


def _page_samples(item: Tuple[CompressedImage, GroundTruth, int]) -> List[Tuple[FeatureName, int, float]]:
    page, truth, min_height = item
    return page_training_samples(page, truth, min_height)


def collect_training_sets(
    pages: Iterable[Tuple[CompressedImage, GroundTruth]],
    min_height: int = MIN_LINE_HEIGHT,
    mapper: Callable = map,
) -> Dict[FeatureName, TrainingSet]:
    """Training sets per feature from pages with ground truth; mapper may run pages in parallel"""
    grouped: Dict[FeatureName, List[Tuple[int, float]]] = defaultdict(list)
    work = [(page, truth, min_height) for page, truth in pages]
    for samples in mapper(_page_samples, work):
        for feature, size, value in samples:
            grouped[feature].append((size, value))
    return {
        feature: TrainingSet(feature_name=feature, samples=tuple(values))
        for feature, values in grouped.items()
    }


def format_models(models: Mapping[FeatureName, RegressionModel]) -> str:
    lines = [FORMAT_HEADER]
    for feature in FeatureName:
        model = models.get(feature)
        if model is None:
            continue
        lines.append(
            f"feature={feature.value} p={model.p!r} q={model.q!r} "
            f"resid={model.residual_norm!r} n={model.n_samples}"
        )
    return "\n".join(lines) + "\n"


def save_models(models: Mapping[FeatureName, RegressionModel], path: PathLike) -> None:
    try:
        Path(path).write_text(format_models(models), encoding="utf-8")
    except OSError as e:
        raise DocumentIOError(f"{path}: {e.strerror or e}") from e


def parse_models(text: str) -> ModelSet:
    models: ModelSet = {}
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        match = _MODEL_LINE.match(line)
        if match is None:
            raise ModelFileError(f"malformed model line {raw_line!r}", number)
        try:
            feature = FeatureName(match["name"])
        except ValueError:
            raise ModelFileError(f"unknown feature {match['name']!r}", number) from None
        if feature in models:
            raise ModelFileError(f"duplicate feature {feature.value!r}", number)
        try:
            p, q, resid = float(match["p"]), float(match["q"]), float(match["resid"])
            n_samples = int(match["n"])
        except ValueError as e:
            raise ModelFileError(f"malformed number: {e}", number) from None
        if not all(math.isfinite(v) for v in (p, q, resid)) or p <= 0 or resid < 0 or n_samples < 2:
            raise ModelFileError(f"invalid model parameters in {raw_line!r}", number)
        models[feature] = RegressionModel(feature_name=feature, p=p, q=q, residual_norm=resid, n_samples=n_samples)
    return models


def load_models(path: PathLike) -> ModelSet:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentIOError(f"{path}: {e.strerror or e}") from e
    models = parse_models(text)
    logger.debug(f"Loaded {len(models)} models from {path}")
    return models
