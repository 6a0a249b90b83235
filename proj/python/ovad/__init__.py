"""Attribute detection metrics for open-vocabulary detectors."""

import json
from pathlib import Path

from ._ovad import (
    DataError,
    average_precision,
    extract_parts,
    frequency_splits,
    iou,
    match_score,
    sigmoid,
)
from . import _ovad

__all__ = [
    "DataError",
    "average_precision",
    "evaluate",
    "extract_parts",
    "frequency_splits",
    "iou",
    "match_score",
    "sigmoid",
    "stats",
]


def _default_categories():
    here = Path(__file__).resolve().parent
    for candidate in (here / "data", here.parents[1] / "data", here.parents[2] / "data"):
        if (candidate / "categories.json").is_file():
            return candidate / "categories.json"
    raise FileNotFoundError("categories.json not found; pass categories=")


def evaluate(ann, pred, mode="detection", iou_threshold=0.5, categories=None, workers=0):
    """Evaluate a prediction file (mode "detection") or box-oracle scores (mode "box").

    Returns the same document that ``ovad eval-ovad --json`` writes.
    """
    text = _ovad.evaluate_json(
        str(ann), str(pred), str(categories or _default_categories()), mode, iou_threshold, workers
    )
    return json.loads(text)


def stats(ann, categories=None):
    return json.loads(_ovad.stats_json(str(ann), str(categories or _default_categories())))
