"""Exact-combinatorics tests backed by a brute-force pair-enumeration oracle."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdgs.class_structure import (
    INF,
    CurvePoint,
    StructureSpec,
    class_ratios,
    curve_csv_lines,
    dissimilar_count,
    format_ratio,
    is_infinite,
    similar_count,
    total_pairs,
    transformation_curve,
)


def brute_force_counts(n: int, ks) -> tuple[int, int, int]:
    """Independent oracle: literally enumerate every within-shot channel pair
    against an explicit incorrect-channel set and count classes."""
    total = similar = 0
    for k in ks:
        bad = set(range(k))  # which channels are bad is irrelevant to counts
        for a, b in itertools.combinations(range(n), 2):
            total += 1
            if a not in bad and b not in bad:
                similar += 1
    return total, similar, total - similar


# ------------------------------------------------------------- known values

def test_total_pairs_known_values():
    assert total_pairs(StructureSpec(4, (1,))) == 6
    assert total_pairs(StructureSpec(11, (1,) * 7)) == 385
    assert total_pairs(StructureSpec(2, (0,))) == 1


def test_similar_count_known_values():
    assert similar_count(StructureSpec(4, (1,))) == 3
    assert similar_count(StructureSpec(4, (0,))) == 6
    # brute-force derived: C(3,2) + C(5,2) = 3 + 10
    assert similar_count(StructureSpec(5, (2, 0))) == 13
    assert brute_force_counts(5, (2, 0))[1] == 13


def test_dissimilar_count_known_values():
    assert dissimilar_count(StructureSpec(4, (1,))) == 3
    assert dissimilar_count(StructureSpec(4, (0,))) == 0
    assert dissimilar_count(StructureSpec(5, (2,))) == 7
    assert brute_force_counts(5, (2,))[2] == 7


def test_class_ratios_known_values():
    r = class_ratios(StructureSpec(4, (1,)))
    assert r.tdgs_ratio == 1 and r.raw_ratio == Fraction(1, 3)
    assert r.balanced_improved

    r = class_ratios(StructureSpec(7, (2,)))
    assert r.tdgs_ratio == Fraction(11, 10) and r.raw_ratio == Fraction(2, 5)
    assert r.balanced_improved

    r = class_ratios(StructureSpec(5, (2,)))
    assert r.tdgs_ratio == Fraction(7, 3) and r.raw_ratio == Fraction(2, 3)
    assert not r.balanced_improved


def test_class_ratios_infinities():
    # all channels bad: no similar pairs and no correct channels
    r = class_ratios(StructureSpec(4, (4,)))
    assert is_infinite(r.tdgs_ratio) and is_infinite(r.raw_ratio)
    assert r.balanced_improved  # both maximally imbalanced: no worsening
    # one side infinite only
    r = class_ratios(StructureSpec(3, (2,)))
    assert is_infinite(r.tdgs_ratio) and not is_infinite(r.raw_ratio)
    assert not r.balanced_improved


def test_zero_fault_boundary_is_tie():
    # k=0: |0-1| == |1-0|, non-strict inequality counts as improved
    r = class_ratios(StructureSpec(6, (0,)))
    assert r.tdgs_ratio == 0 and r.raw_ratio == 0
    assert r.balanced_improved


# -------------------------------------------------------- exhaustive oracle

def test_counts_match_brute_force_exhaustive():
    """All N <= 8, every k-combination per shot, P <= 3."""
    for n in range(2, 9):
        for p in range(1, 4):
            for ks in itertools.product(range(n + 1), repeat=p):
                spec = StructureSpec(n, ks)
                bt, bs, bd = brute_force_counts(n, ks)
                assert total_pairs(spec) == bt
                assert similar_count(spec) == bs
                assert dissimilar_count(spec) == bd


def test_balanced_area_sweep():
    """Every N in {4..16}, every k with k/(N-k) <= 0.4 and N-k >= 2."""
    checked = 0
    for n in range(4, 17):
        for k in range(0, n - 1):
            if Fraction(k, n - k) <= Fraction(2, 5):
                assert class_ratios(StructureSpec(n, (k,))).balanced_improved, (n, k)
                checked += 1
    assert checked > 13  # at least one k > 0 case per N


# ------------------------------------------------------------- properties

shot_specs = st.builds(
    lambda n, ks: StructureSpec(n, tuple(k % (n + 1) for k in ks)),
    st.integers(2, 12),
    st.lists(st.integers(0, 12), min_size=1, max_size=4),
)


@settings(max_examples=200, deadline=None)
@given(shot_specs)
def test_counts_partition(spec):
    assert similar_count(spec) + dissimilar_count(spec) == total_pairs(spec)
    assert 0 <= similar_count(spec) <= total_pairs(spec)


@settings(max_examples=200, deadline=None)
@given(shot_specs, st.integers(0, 3))
def test_similar_monotone_in_k(spec, which):
    i = which % len(spec.incorrect_per_shot)
    ks = list(spec.incorrect_per_shot)
    if ks[i] >= spec.n_channels:
        return
    bumped = StructureSpec(spec.n_channels, tuple(
        k + 1 if j == i else k for j, k in enumerate(ks)
    ))
    assert similar_count(bumped) <= similar_count(spec)


# ------------------------------------------------------------------- curve

def test_transformation_curve_known_points():
    pts = transformation_curve(4, [0, Fraction(1, 4)])
    assert pts == [
        CurvePoint(Fraction(0), Fraction(0), Fraction(0)),
        CurvePoint(Fraction(1, 4), Fraction(1, 3), Fraction(1)),
    ]
    pts = transformation_curve(10, [0.1])
    assert pts[0].raw_ratio == Fraction(1, 9)
    assert pts[0].tdgs_ratio == Fraction(9, 36)
    pts = transformation_curve(4, [1])
    assert is_infinite(pts[0].raw_ratio) and is_infinite(pts[0].tdgs_ratio)


def test_transformation_curve_sorted_and_rejects():
    pts = transformation_curve(8, [Fraction(1, 2), 0, Fraction(1, 4)])
    assert [p.q for p in pts] == [0, Fraction(1, 4), Fraction(1, 2)]
    with pytest.raises(ValueError, match="0.3"):
        transformation_curve(4, [0.3])  # 1.2 channels is not a count
    with pytest.raises(ValueError):
        transformation_curve(4, [2])  # q outside [0,1]


def test_curve_csv_format():
    lines = curve_csv_lines(transformation_curve(4, [0, 1]))
    assert lines[0] == "q,raw_ratio,tdgs_ratio"
    assert lines[1] == "0.0,0.0,0.0"
    assert lines[2] == "1.0,inf,inf"


def test_format_ratio():
    assert format_ratio(Fraction(1, 2)) == "0.5"
    assert format_ratio(INF) == "inf"


def test_spec_validation():
    with pytest.raises(ValueError):
        StructureSpec(1, (0,))
    with pytest.raises(ValueError):
        StructureSpec(4, ())
    with pytest.raises(ValueError):
        StructureSpec(4, (5,))
