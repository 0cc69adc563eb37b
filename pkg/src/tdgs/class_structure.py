"""Exact class-structure arithmetic for similarity-pair training sets.

A multi-channel measurement (MUM) system with N channels observed over P
discharges yields P*C(N,2) channel-pair samples.  A pair is "similar" when
both member channels are correct, "dissimilar" when at least one is not.
This module computes the resulting sample counts and class ratios with
exact integer/rational arithmetic, and decides whether pairing made the
class structure more balanced than the raw per-channel structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence, Union

# A class ratio is an exact rational, or +inf when the denominator class
# is empty.  Floats never appear except as math.inf.
Ratio = Union[Fraction, float]

INF: float = math.inf


def is_infinite(r: Ratio) -> bool:
    return isinstance(r, float) and math.isinf(r)


def format_ratio(r: Ratio) -> str:
    """Decimal rendering for output boundaries; 'inf' for infinite ratios."""
    if is_infinite(r):
        return "inf"
    return repr(float(r))


@dataclass(frozen=True)
class StructureSpec:
    """N channels plus the per-discharge incorrect-channel counts k_i."""

    n_channels: int
    incorrect_per_shot: tuple[int, ...]

    def __post_init__(self):
        if self.n_channels < 2:
            raise ValueError(f"n_channels must be >= 2, got {self.n_channels}")
        ks = tuple(self.incorrect_per_shot)
        object.__setattr__(self, "incorrect_per_shot", ks)
        if len(ks) < 1:
            raise ValueError("incorrect_per_shot must have at least one entry")
        for i, k in enumerate(ks):
            if not 0 <= k <= self.n_channels:
                raise ValueError(
                    f"incorrect_per_shot[{i}]={k} outside [0, {self.n_channels}]"
                )

    @property
    def n_shots(self) -> int:
        return len(self.incorrect_per_shot)


@dataclass(frozen=True)
class ClassStructureReport:
    total_pairs: int
    similar: int
    dissimilar: int
    tdgs_ratio: Ratio  # dissimilar / similar
    raw_ratio: Ratio  # incorrect / correct channel sequences
    balanced_improved: bool


@dataclass(frozen=True)
class CurvePoint:
    """One equal-error-rate point of the class-structure transformation curve."""

    q: Fraction
    raw_ratio: Ratio
    tdgs_ratio: Ratio


def total_pairs(spec: StructureSpec) -> int:
    """P * C(N, 2): every within-shot channel pair is one sample."""
    return spec.n_shots * comb(spec.n_channels, 2)


def similar_count(spec: StructureSpec) -> int:
    """Sum over shots of C(N - k_i, 2): pairs of two correct channels."""
    return sum(comb(spec.n_channels - k, 2) for k in spec.incorrect_per_shot)


def dissimilar_count(spec: StructureSpec) -> int:
    """Pairs touching at least one incorrect channel."""
    return total_pairs(spec) - similar_count(spec)


def _ratio(num: int, den: int) -> Ratio:
    if den == 0:
        return INF
    return Fraction(num, den)


def _balanced_improved(tdgs: Ratio, raw: Ratio) -> bool:
    """|R_TDGS - 1| <= |1 - R_J|, i.e. pairing did not worsen the balance.

    Infinite ratios: an infinite side is maximally imbalanced, so the test
    fails unless both sides are infinite.
    """
    if is_infinite(tdgs) or is_infinite(raw):
        return is_infinite(tdgs) and is_infinite(raw)
    return abs(tdgs - 1) <= abs(1 - raw)


def class_ratios(spec: StructureSpec) -> ClassStructureReport:
    total = total_pairs(spec)
    sim = similar_count(spec)
    dis = total - sim
    incorrect = sum(spec.incorrect_per_shot)
    correct = spec.n_channels * spec.n_shots - incorrect
    tdgs = _ratio(dis, sim)
    raw = _ratio(incorrect, correct)
    return ClassStructureReport(
        total_pairs=total,
        similar=sim,
        dissimilar=dis,
        tdgs_ratio=tdgs,
        raw_ratio=raw,
        balanced_improved=_balanced_improved(tdgs, raw),
    )


def transformation_curve(
    n_channels: int, q_grid: Sequence[Union[Fraction, float, int, str]]
) -> list[CurvePoint]:
    """Single-shot (raw_ratio, tdgs_ratio) points for equal error rate q.

    Each q must satisfy q*N integer (an actual incorrect-channel count);
    anything else is rejected by name.  Output is ordered by q ascending.
    """
    if n_channels < 2:
        raise ValueError(f"n_channels must be >= 2, got {n_channels}")
    points = []
    for q_in in q_grid:
        # Floats are read as their decimal literal (0.1 means 1/10), not
        # their binary expansion.
        q = Fraction(str(q_in)) if isinstance(q_in, float) else Fraction(q_in)
        if not 0 <= q <= 1:
            raise ValueError(f"q={q_in} outside [0, 1]")
        k_frac = q * n_channels
        if k_frac.denominator != 1:
            raise ValueError(
                f"q={q_in} is infeasible for N={n_channels}: "
                f"q*N={k_frac} is not an integer channel count"
            )
        report = class_ratios(StructureSpec(n_channels, (int(k_frac),)))
        points.append(CurvePoint(q=q, raw_ratio=report.raw_ratio, tdgs_ratio=report.tdgs_ratio))
    points.sort(key=lambda p: p.q)
    return points


def curve_csv_lines(points: Sequence[CurvePoint]) -> list[str]:
    """CSV rows for external plotting: header `q,raw_ratio,tdgs_ratio`."""
    lines = ["q,raw_ratio,tdgs_ratio"]
    for p in points:
        lines.append(f"{format_ratio(p.q)},{format_ratio(p.raw_ratio)},{format_ratio(p.tdgs_ratio)}")
    return lines
