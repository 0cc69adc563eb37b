"""Similarity samples: within-shot channel pairs with symmetric features.

The classifier never sees raw traces; each channel pair is summarized by a
fixed 6-dimensional vector of scale-free similarity statistics (optionally
extended with a resampled |difference| profile).  Every statistic is
symmetric in its two arguments by construction, so feature(a, b) and
feature(b, a) are bit-identical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .data_model import ChannelTrace, Shot, validate_shots

N_SUMMARY_FEATURES = 6


@dataclass(frozen=True)
class FeatureConfig:
    include_diff_vector: bool = False
    resample_len: int = 256

    def __post_init__(self):
        if self.resample_len < 2:
            raise ValueError("resample_len must be >= 2")

    @property
    def dimension(self) -> int:
        return N_SUMMARY_FEATURES + (self.resample_len if self.include_diff_vector else 0)


@dataclass(frozen=True)
class PairSample:
    shot_id: str
    channel_a: int
    channel_b: int
    features: np.ndarray
    tag: str  # similar | dissimilar | unknown

    def __post_init__(self):
        if not self.channel_a < self.channel_b:
            raise ValueError("channel_a must be < channel_b")
        if self.tag not in ("similar", "dissimilar", "unknown"):
            raise ValueError(f"bad tag {self.tag!r}")
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features must be finite")


class SimilarityStats(NamedTuple):
    pearson: float
    cosine_centered: float
    rms_diff: float
    range_ratio: float
    diff_corr: float
    exceed_frac: float
    degenerate: bool  # a zero-variance input forced correlation terms to 0


def _zscore(x: np.ndarray) -> np.ndarray:
    sd = x.std()
    if sd == 0:
        return np.zeros_like(x)
    return (x - x.mean()) / sd


def _corr(x: np.ndarray, y: np.ndarray) -> tuple[float, bool]:
    xc = x - x.mean()
    yc = y - y.mean()
    nx = float(np.sqrt(xc @ xc))
    ny = float(np.sqrt(yc @ yc))
    if nx == 0 or ny == 0:
        return 0.0, True
    return float(np.clip((xc @ yc) / (nx * ny), -1.0, 1.0)), False


def similarity_stats(a: np.ndarray, b: np.ndarray) -> SimilarityStats:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or len(a) < 2:
        raise ValueError("traces must be equal-length 1-D arrays of length >= 2")

    pearson, deg1 = _corr(a, b)
    # Cosine of the mean-removed traces; kept as its own slot even though it
    # coincides with Pearson up to rounding, so the feature layout is stable
    # if either definition changes.
    cosine, deg2 = _corr(a, b)

    za, zb = _zscore(a), _zscore(b)
    rms_diff = 0.5 * float(np.sqrt(np.mean((za - zb) ** 2)))

    ra, rb = float(np.ptp(a)), float(np.ptp(b))
    top = max(ra, rb)
    range_ratio = 1.0 if top == 0 else min(ra, rb) / top

    diff_corr, deg3 = _corr(np.diff(a), np.diff(b))
    exceed_frac = float(np.mean(np.abs(za - zb) > 2.0))

    return SimilarityStats(
        pearson=pearson,
        cosine_centered=cosine,
        rms_diff=rms_diff,
        range_ratio=range_ratio,
        diff_corr=diff_corr,
        exceed_frac=exceed_frac,
        degenerate=deg1 or deg2 or deg3,
    )


def _resampled_abs_diff(a: np.ndarray, b: np.ndarray, length: int) -> np.ndarray:
    grid = np.linspace(0.0, 1.0, length)
    src = np.linspace(0.0, 1.0, len(a))
    ra = np.interp(grid, src, a)
    rb = np.interp(grid, src, b)
    return np.abs(_zscore(ra) - _zscore(rb))


def features(trace_a: ChannelTrace, trace_b: ChannelTrace,
             config: FeatureConfig = FeatureConfig()) -> np.ndarray:
    stats = similarity_stats(trace_a.samples, trace_b.samples)
    vec = np.array(stats[:N_SUMMARY_FEATURES], dtype=float)
    if config.include_diff_vector:
        vec = np.concatenate(
            [vec, _resampled_abs_diff(trace_a.samples, trace_b.samples, config.resample_len)]
        )
    return vec


def pair_tag(label_a: str, label_b: str) -> str:
    # An incorrect member decides the pair even if the other is unknown.
    if label_a == "incorrect" or label_b == "incorrect":
        return "dissimilar"
    if label_a == "unknown" or label_b == "unknown":
        return "unknown"
    return "similar"


def build_pairs(shots: Sequence[Shot],
                config: FeatureConfig = FeatureConfig()) -> list[PairSample]:
    """All C(N,2) within-shot pairs per shot; never pairs across shots."""
    validate_shots(shots)
    samples = []
    for shot in shots:
        for ca, cb in itertools.combinations(shot.channels, 2):
            samples.append(
                PairSample(
                    shot_id=shot.shot_id,
                    channel_a=ca.channel_index,
                    channel_b=cb.channel_index,
                    features=features(ca, cb, config),
                    tag=pair_tag(ca.label, cb.label),
                )
            )
    return samples


def pairs_csv_lines(samples: Sequence[PairSample]) -> list[str]:
    """CSV dump: shot_id,ch_a,ch_b,tag,f1..f6[,d1..dL]."""
    if not samples:
        return ["shot_id,ch_a,ch_b,tag"]
    dim = len(samples[0].features)
    names = [f"f{i + 1}" for i in range(N_SUMMARY_FEATURES)]
    names += [f"d{i + 1}" for i in range(dim - N_SUMMARY_FEATURES)]
    lines = ["shot_id,ch_a,ch_b,tag," + ",".join(names)]
    for s in samples:
        vals = ",".join(repr(float(v)) for v in s.features)
        lines.append(f"{s.shot_id},{s.channel_a},{s.channel_b},{s.tag},{vals}")
    return lines
