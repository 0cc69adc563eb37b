"""Data model, persistence round-trip, and synthetic-generator tests."""

import json

import numpy as np
import pytest

from tdgs.class_structure import StructureSpec
from tdgs.data_model import (
    NOISE_SIGMA,
    ChannelTrace,
    FaultSpec,
    Shot,
    _apply_fault,
    _base_waveform,
    _draw_fault,
    load_shots,
    save_shots,
    structure_of,
    synthesize,
    validate_shot,
)


def make_shot(shot_id="s1", n=3, m=30, labels=None):
    labels = labels or ["correct"] * n
    rng = np.random.default_rng(0)
    return Shot(
        shot_id=shot_id,
        dt=1e-3,
        channels=[
            ChannelTrace(i, rng.normal(size=m), labels[i]) for i in range(n)
        ],
    )


# ------------------------------------------------------------- validation

def test_validate_rejects_bad_shots():
    shot = make_shot()
    shot.dt = -1.0
    with pytest.raises(ValueError, match="dt"):
        validate_shot(shot)

    shot = make_shot()
    shot.channels[1].samples = shot.channels[1].samples[:-3]
    with pytest.raises(ValueError, match="unequal"):
        validate_shot(shot)

    shot = make_shot()
    shot.channels[2].channel_index = 5
    with pytest.raises(ValueError, match="contiguous"):
        validate_shot(shot)

    shot = make_shot()
    shot.channels[0].samples[4] = np.nan
    with pytest.raises(ValueError, match="NaN"):
        validate_shot(shot)


def test_label_and_fault_kind_validation():
    with pytest.raises(ValueError, match="label"):
        ChannelTrace(0, np.zeros(5), "bogus")
    with pytest.raises(ValueError, match="fault kind"):
        FaultSpec("melted", 0)


# ------------------------------------------------------------- persistence

def test_round_trip_identity(tmp_path):
    shots = [make_shot("a", labels=["correct", "incorrect", "unknown"]),
             make_shot("b", n=4, m=25)]
    path = tmp_path / "d.json"
    save_shots(shots, path)
    back = load_shots(path)
    assert len(back) == 2
    for orig, got in zip(shots, back):
        assert got.shot_id == orig.shot_id
        assert got.dt == orig.dt
        for co, cg in zip(orig.channels, got.channels):
            assert cg.channel_index == co.channel_index
            assert cg.label == co.label
            np.testing.assert_array_equal(cg.samples, co.samples)


def test_load_rejects_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"not_shots": []}))
    with pytest.raises(ValueError, match="shots"):
        load_shots(path)
    path.write_text(json.dumps({"shots": [{"shot_id": "x"}]}))
    with pytest.raises(ValueError, match="malformed"):
        load_shots(path)
    # unequal lengths caught at validation
    path.write_text(json.dumps({"shots": [{
        "shot_id": "x", "dt": 1.0,
        "channels": [
            {"index": 0, "label": "correct", "samples": [0.0, 1.0, 2.0]},
            {"index": 1, "label": "correct", "samples": [0.0, 1.0]},
        ],
    }]}))
    with pytest.raises(ValueError, match="unequal"):
        load_shots(path)


def test_load_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        load_shots(tmp_path / "nope.json")


# -------------------------------------------------------------- generator

def test_synthesize_determinism():
    a = synthesize(5, 3, 60, [1, 0, 2], seed=11)
    b = synthesize(5, 3, 60, [1, 0, 2], seed=11)
    for sa, sb in zip(a, b):
        for ca, cb in zip(sa.channels, sb.channels):
            np.testing.assert_array_equal(ca.samples, cb.samples)
            assert ca.label == cb.label
    c = synthesize(5, 3, 60, [1, 0, 2], seed=12)
    assert any(
        not np.array_equal(ca.samples, cc.samples)
        for sa, sc in zip(a, c)
        for ca, cc in zip(sa.channels, sc.channels)
    )


def test_synthesize_label_soundness():
    ks = [1, 1, 0, 2, 0, 1, 1]
    shots = synthesize(11, 7, 40, ks, seed=3)
    for shot, k in zip(shots, ks):
        labels = [c.label for c in shot.channels]
        assert labels.count("incorrect") == k
        assert labels.count("correct") == 11 - k
    assert structure_of(shots) == StructureSpec(11, tuple(ks))


def test_synthesize_all_zero_faults():
    shots = synthesize(4, 2, 40, [0, 0], seed=0)
    assert all(c.label == "correct" for s in shots for c in s.channels)


def test_synthesize_rejects_bad_args():
    with pytest.raises(ValueError):
        synthesize(1, 1, 40, [0], seed=0)
    with pytest.raises(ValueError):
        synthesize(4, 2, 40, [0], seed=0)  # length mismatch
    with pytest.raises(ValueError):
        synthesize(4, 1, 40, [5], seed=0)  # k > N
    with pytest.raises(ValueError):
        synthesize(4, 1, 10, [0], seed=0)  # too few samples


def test_structure_of_rejects_unknown_labels():
    shot = make_shot(labels=["correct", "unknown", "correct"])
    with pytest.raises(ValueError, match="unknown"):
        structure_of([shot])


def test_faults_are_detectable():
    """Every fault kind moves the trace > 5x the fluctuation amplitude
    somewhere, relative to its clean counterfactual."""
    m = 200
    rng = np.random.default_rng(5)
    base = _base_waveform(m, rng)
    seen = set()
    for trial in range(200):
        draw_rng = np.random.default_rng([7, trial])
        fault = _draw_fault(0, m, draw_rng)
        scale = 0.8
        clean = scale * base
        faulty = _apply_fault(clean, fault, scale, draw_rng)
        deviation = np.abs(faulty - clean).max()
        assert deviation > 5 * NOISE_SIGMA * scale, fault.kind
        seen.add(fault.kind)
        if len(seen) == 5:
            break
    assert len(seen) == 5  # all kinds exercised


def test_base_waveform_shape():
    w = _base_waveform(100, np.random.default_rng(0))
    assert len(w) == 100
    assert w[0] == 0.0 and w[-1] == 0.0
    flat = w[15:85]
    assert np.all(np.abs(flat - 1.0) < 0.2)  # flat-top near 1 with small ripple
