"""Confusion accounting, G-mean, grouped assessment, channel flagging.

Positive class is "dissimilar" throughout.  Group keys are the exact
rational class ratios from class_structure, so reports with the same
training-set structure land in the same bucket without float-equality
accidents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .class_structure import Ratio, is_infinite
from .data_model import Shot

TAG_TO_LABEL = {"dissimilar": 1, "similar": -1}


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    fp: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fn, self.fp, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")


@dataclass(frozen=True)
class EvalReport:
    confusion: ConfusionMatrix
    recall_pos: float
    recall_neg: float
    g_mean: float
    class_structure: Ratio


def confusion(predictions: Sequence[int], truths: Sequence[str]) -> ConfusionMatrix:
    if len(predictions) != len(truths):
        raise ValueError("predictions and truths must have equal length")
    tp = fn = fp = tn = 0
    for pred, tag in zip(predictions, truths):
        if tag not in TAG_TO_LABEL:
            raise ValueError(f"cannot score tag {tag!r}; expected similar/dissimilar")
        truth = TAG_TO_LABEL[tag]
        if truth == 1:
            if pred == 1:
                tp += 1
            else:
                fn += 1
        else:
            if pred == 1:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fn=fn, fp=fp, tn=tn)


def g_mean(cm: ConfusionMatrix) -> float:
    """sqrt(recall on dissimilar * recall on similar)."""
    if cm.tp + cm.fn == 0:
        raise ValueError("G-mean undefined: no dissimilar samples in truth")
    if cm.tn + cm.fp == 0:
        raise ValueError("G-mean undefined: no similar samples in truth")
    recall_pos = cm.tp / (cm.tp + cm.fn)
    recall_neg = cm.tn / (cm.tn + cm.fp)
    return math.sqrt(recall_pos * recall_neg)


def make_report(cm: ConfusionMatrix, class_structure: Ratio) -> EvalReport:
    return EvalReport(
        confusion=cm,
        recall_pos=cm.tp / (cm.tp + cm.fn),
        recall_neg=cm.tn / (cm.tn + cm.fp),
        g_mean=g_mean(cm),
        class_structure=class_structure,
    )


def _group_sort_key(ratio: Ratio):
    return (1, 0.0) if is_infinite(ratio) else (0, Fraction(ratio))


def grouped_assessment(
    reports: Sequence[EvalReport],
) -> list[tuple[Ratio, float, int]]:
    """(class_structure, mean G-mean, count) per exact structure, ascending."""
    if not reports:
        raise ValueError("no reports to group")
    groups: dict[Ratio, list[float]] = {}
    for r in reports:
        groups.setdefault(r.class_structure, []).append(r.g_mean)
    return [
        (key, sum(vals) / len(vals), len(vals))
        for key, vals in sorted(groups.items(), key=lambda kv: _group_sort_key(kv[0]))
    ]


def flag_incorrect_channels(
    shot: Shot,
    pair_predictions: Mapping[tuple[int, int], int],
    threshold: float = 0.5,
) -> set[int]:
    """Channels whose dissimilar-pair share exceeds `threshold`.

    A channel all of whose pairs are dissimilar is always flagged; below
    that, ties at the threshold resolve toward not flagging (a lone bad
    partner should not condemn a good channel in a 3-channel system).
    """
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1]")
    n = shot.n_channels
    expected = {(a, b) for a in range(n) for b in range(a + 1, n)}
    got = {(min(a, b), max(a, b)) for a, b in pair_predictions}
    if got != expected:
        missing = sorted(expected - got)
        raise ValueError(f"incomplete pair predictions; missing {missing[:5]}")
    if len(pair_predictions) != len(expected):
        raise ValueError("duplicate pair predictions (both orderings present)")

    dissim_count = [0] * n
    for (a, b), label in pair_predictions.items():
        if label == 1:
            lo, hi = min(a, b), max(a, b)
            dissim_count[lo] += 1
            dissim_count[hi] += 1

    flagged = set()
    for ch in range(n):
        count = dissim_count[ch]
        if count == n - 1 or count > threshold * (n - 1):
            flagged.add(ch)
    return flagged
