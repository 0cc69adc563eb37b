"""Shot/channel data model, JSON persistence, and a synthetic generator.

Real multi-channel diagnostic data is not shipped with this package; the
synthesizer produces labeled datasets with the same shape: every channel of
a shot sees the same base waveform (scaled by a per-channel chord factor),
and a chosen number of channels per shot is corrupted by an injected fault
and labeled incorrect.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .class_structure import StructureSpec

LABELS = ("correct", "incorrect", "unknown")

FAULT_KINDS = (
    "spike_burst",
    "baseline_jump",
    "dead_channel",
    "random_walk_drift",
    "amplitude_collapse",
)

# Relative sigma of the shared flat-top fluctuations; fault magnitudes are
# chosen so a corrupted trace deviates from its clean counterfactual by
# well over 5x this amplitude somewhere.
NOISE_SIGMA = 0.02
CHANNEL_NOISE_SIGMA = 0.005


@dataclass(frozen=True)
class FaultSpec:
    kind: str
    target_channel: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FAULT_KINDS:
            raise ValueError(f"unknown fault kind {self.kind!r}")
        if self.target_channel < 0:
            raise ValueError("target_channel must be non-negative")


@dataclass(eq=False)
class ChannelTrace:
    channel_index: int
    samples: np.ndarray
    label: str = "unknown"

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}, got {self.label!r}")


@dataclass(eq=False)
class Shot:
    shot_id: str
    dt: float
    channels: list[ChannelTrace]

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    @property
    def n_samples(self) -> int:
        return len(self.channels[0].samples)


def validate_shot(shot: Shot) -> None:
    if shot.dt <= 0:
        raise ValueError(f"shot {shot.shot_id!r}: dt must be positive, got {shot.dt}")
    if shot.n_channels < 2:
        raise ValueError(f"shot {shot.shot_id!r}: needs >= 2 channels")
    lengths = {len(c.samples) for c in shot.channels}
    if len(lengths) != 1:
        raise ValueError(
            f"shot {shot.shot_id!r}: unequal trace lengths {sorted(lengths)}"
        )
    if lengths.pop() < 2:
        raise ValueError(f"shot {shot.shot_id!r}: traces must have >= 2 samples")
    indices = [c.channel_index for c in shot.channels]
    if indices != list(range(shot.n_channels)):
        raise ValueError(
            f"shot {shot.shot_id!r}: channel indices must be contiguous from 0, "
            f"got {indices}"
        )
    for c in shot.channels:
        if not np.all(np.isfinite(c.samples)):
            raise ValueError(
                f"shot {shot.shot_id!r} channel {c.channel_index}: "
                "samples contain NaN/inf"
            )


def validate_shots(shots: Sequence[Shot]) -> None:
    if not shots:
        raise ValueError("dataset contains no shots")
    for shot in shots:
        validate_shot(shot)


def save_shots(shots: Sequence[Shot], path) -> None:
    """Write the JSON dataset schema; load_shots inverts it exactly."""
    validate_shots(shots)
    doc = {
        "shots": [
            {
                "shot_id": s.shot_id,
                "dt": s.dt,
                "channels": [
                    {
                        "index": c.channel_index,
                        "label": c.label,
                        "samples": [float(x) for x in c.samples],
                    }
                    for c in s.channels
                ],
            }
            for s in shots
        ]
    }
    with open(path, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def load_shots(path) -> list[Shot]:
    with open(path) as f:
        doc = json.load(f)
    if not isinstance(doc, dict) or "shots" not in doc:
        raise ValueError(f"{path}: not a shot dataset (missing 'shots' key)")
    shots = []
    for raw in doc["shots"]:
        try:
            channels = [
                ChannelTrace(
                    channel_index=int(ch["index"]),
                    samples=np.asarray(ch["samples"], dtype=float),
                    label=str(ch["label"]),
                )
                for ch in raw["channels"]
            ]
            shot = Shot(shot_id=str(raw["shot_id"]), dt=float(raw["dt"]), channels=channels)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"{path}: malformed shot record: {exc}") from exc
        shots.append(shot)
    validate_shots(shots)
    return shots


def structure_of(shots: Sequence[Shot]) -> StructureSpec:
    """Labeled dataset -> (N, per-shot incorrect counts). Rejects unknowns."""
    validate_shots(shots)
    n = shots[0].n_channels
    for s in shots:
        if s.n_channels != n:
            raise ValueError(
                f"shot {s.shot_id!r} has {s.n_channels} channels, expected {n}"
            )
    ks = []
    for s in shots:
        labels = [c.label for c in s.channels]
        if "unknown" in labels:
            raise ValueError(
                f"shot {s.shot_id!r} has unknown channel labels; "
                "class structure needs fully labeled data"
            )
        ks.append(labels.count("incorrect"))
    return StructureSpec(n, tuple(ks))


def _base_waveform(n_samples: int, rng: np.random.Generator) -> np.ndarray:
    """Trapezoid (10% up, 80% flat-top, 10% down) plus smoothed shared noise."""
    ramp = max(1, n_samples // 10)
    shape = np.ones(n_samples)
    shape[:ramp] = np.linspace(0.0, 1.0, ramp, endpoint=False)
    shape[n_samples - ramp:] = np.linspace(1.0, 0.0, ramp)
    white = rng.normal(0.0, 1.0, n_samples)
    window = max(3, n_samples // 50)
    kernel = np.ones(window) / window
    smooth = np.convolve(white, kernel, mode="same")
    sd = smooth.std()
    if sd > 0:
        smooth = smooth / sd * NOISE_SIGMA
    return shape + smooth * shape


def _apply_fault(trace: np.ndarray, fault: FaultSpec, scale: float,
                 rng: np.random.Generator) -> np.ndarray:
    """Corrupt a clean trace in place-free fashion; `scale` is the channel's
    chord-scaled amplitude, so fault size tracks the channel's own units."""
    m = len(trace)
    out = trace.copy()
    kind = fault.kind
    p = fault.params
    if kind == "spike_burst":
        n_spikes = int(p["n_spikes"])
        amp = p["amplitude"] * scale
        positions = np.asarray(p["positions"], dtype=int)
        signs = np.asarray(p["signs"], dtype=float)
        for pos, sgn in zip(positions[:n_spikes], signs[:n_spikes]):
            out[pos] += sgn * amp
    elif kind == "baseline_jump":
        t0 = int(p["start"])
        out[t0:] += p["height"] * scale
    elif kind == "dead_channel":
        t0 = int(p["start"])
        out[t0:] = 0.0
    elif kind == "random_walk_drift":
        steps = rng.normal(0.0, 1.0, m)
        walk = np.cumsum(steps)
        peak = np.abs(walk).max()
        if peak > 0:
            walk = walk / peak * p["extent"] * scale
        out += walk
    elif kind == "amplitude_collapse":
        t0 = int(p["start"])
        out[t0:] *= p["gain"]
    return out


def _draw_fault(channel: int, n_samples: int, rng: np.random.Generator) -> FaultSpec:
    kind = FAULT_KINDS[rng.integers(len(FAULT_KINDS))]
    m = n_samples
    if kind == "spike_burst":
        n_spikes = int(rng.integers(3, 9))
        params = {
            "n_spikes": n_spikes,
            "amplitude": float(rng.uniform(0.15, 0.35)),
            "positions": [int(x) for x in rng.integers(0, m, n_spikes)],
            "signs": [float(x) for x in rng.choice([-1.0, 1.0], n_spikes)],
        }
    elif kind == "baseline_jump":
        params = {
            "start": int(rng.integers(m // 5, 4 * m // 5)),
            "height": float(rng.choice([-1.0, 1.0]) * rng.uniform(0.15, 0.4)),
        }
    elif kind == "dead_channel":
        params = {"start": int(rng.integers(m // 10, m // 2))}
    elif kind == "random_walk_drift":
        params = {"extent": float(rng.uniform(0.2, 0.5))}
    else:  # amplitude_collapse
        params = {
            "start": int(rng.integers(m // 10, m // 2)),
            "gain": float(rng.uniform(0.2, 0.6)),
        }
    return FaultSpec(kind=kind, target_channel=channel, params=params)


def synthesize(
    n_channels: int,
    n_shots: int,
    samples_per_shot: int,
    faults_per_shot: Sequence[int],
    seed: int,
) -> list[Shot]:
    """Deterministic labeled dataset: shared waveform per shot, chord-scaled
    channels, `faults_per_shot[i]` corrupted channels in shot i."""
    if n_channels < 2:
        raise ValueError(f"n_channels must be >= 2, got {n_channels}")
    if n_shots < 1:
        raise ValueError("n_shots must be positive")
    if samples_per_shot < 20:
        raise ValueError("samples_per_shot must be >= 20")
    faults_per_shot = list(faults_per_shot)
    if len(faults_per_shot) != n_shots:
        raise ValueError(
            f"faults_per_shot has length {len(faults_per_shot)}, expected {n_shots}"
        )
    for i, k in enumerate(faults_per_shot):
        if not 0 <= k <= n_channels:
            raise ValueError(f"faults_per_shot[{i}]={k} outside [0, {n_channels}]")

    shots = []
    for shot_idx in range(n_shots):
        # Per-shot RNG stream keyed on (seed, shot index): shots are
        # independently reproducible.
        rng = np.random.default_rng([seed, shot_idx])
        base = _base_waveform(samples_per_shot, rng)
        log_lo, log_hi = math.log(0.5), math.log(1.0)
        chords = np.exp(rng.uniform(log_lo, log_hi, n_channels))
        k = faults_per_shot[shot_idx]
        bad = set(int(c) for c in rng.choice(n_channels, size=k, replace=False))
        channels = []
        for ch in range(n_channels):
            clean = chords[ch] * (base + rng.normal(0.0, CHANNEL_NOISE_SIGMA, samples_per_shot))
            if ch in bad:
                fault = _draw_fault(ch, samples_per_shot, rng)
                trace = _apply_fault(clean, fault, float(chords[ch]), rng)
                label = "incorrect"
            else:
                trace = clean
                label = "correct"
            channels.append(ChannelTrace(channel_index=ch, samples=trace, label=label))
        shots.append(Shot(shot_id=f"synth-{shot_idx:03d}", dt=1e-3, channels=channels))
    validate_shots(shots)
    return shots
