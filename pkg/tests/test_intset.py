import time
from fractions import Fraction
from typing import List

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cantorsums.config import settings
from cantorsums.exceptions import InvalidParameter
from cantorsums.intset import (
    Gap,
    IntSetBitmap,
    cantor_level,
    density,
    fs_bitmap,
    gap_index_correspondence,
    gap_indices,
    gaps,
    piecewise_shift_invariant,
    ruler_sequence,
    scaled_sumset,
    sumset,
)

from .conftest import brute_fs, brute_gaps, brute_sumset

small_sets = st.sets(st.integers(0, 30), min_size=1, max_size=12)
generator_sets = st.sets(st.integers(1, 25), max_size=8).map(sorted)
sets_with_zero = st.sets(st.integers(1, 40), max_size=20).map(lambda s: sorted(s | {0}))


def shift_oracle(members: List[int]):
    """Gap-by-gap shift predicate written directly from its definition."""
    S = set(members)
    last = max(members)
    all_gaps = brute_gaps(members)
    for i, (beta, gamma) in enumerate(all_gaps):
        length = gamma - beta - 1
        alpha = 0
        for left, right in reversed(all_gaps[:i]):
            if right - left - 1 >= length:
                alpha = right
                break
        t = gamma - alpha
        for x in range(alpha, beta + 1):
            if x in S and x + t <= last and x + t not in S:
                return False, (beta, gamma)
        for y in range(beta + t + 1, gamma + t):
            if y <= last and y in S:
                return False, (beta, gamma)
    return True, None


def test_fs_examples():
    assert list(fs_bitmap([1, 3, 6, 12], 22)) == [
        0, 1, 3, 4, 6, 7, 9, 10, 12, 13, 15, 16, 18, 19, 21, 22
    ]
    assert list(fs_bitmap([], 10)) == [0]
    assert list(fs_bitmap([2, 6], 8)) == [0, 2, 6, 8]


@given(generator_sets, st.integers(0, 120))
def test_fs_matches_subset_enumeration(B, N):
    assert set(fs_bitmap(B, N)) == brute_fs(B, N)


@pytest.mark.parametrize("B", [[0, 1], [3, 2], [1, 1, 4], [-1, 2]])
def test_fs_rejects_bad_generators(B):
    with pytest.raises(InvalidParameter):
        fs_bitmap(B, 10)


def test_sumset_examples():
    assert list(sumset(IntSetBitmap.from_members([0, 1], 3), IntSetBitmap.from_members([0, 2], 3))) == [0, 1, 2, 3]
    zero = IntSetBitmap.from_members([0], 5)
    assert list(sumset(zero, zero)) == [0]
    C = fs_bitmap([1, 3, 6, 12], 22)
    assert list(sumset(C, C)) == list(range(23))


@given(small_sets, small_sets)
def test_sumset_matches_pairwise(A, B):
    N = 60
    left = IntSetBitmap.from_members(A, N)
    right = IntSetBitmap.from_members(B, N)
    assert set(sumset(left, right)) == brute_sumset(A, B, N)


@given(generator_sets, generator_sets, st.integers(0, 150))
def test_generator_sumset_extends_past_operand_bounds(B1, B2, N):
    # 两个 FS 的和集等于合并生成元后的 FS
    left = fs_bitmap(B1, 10)
    right = fs_bitmap(B2, 10)
    expected = brute_sumset(brute_fs(B1, N), brute_fs(B2, N), N)
    assert set(sumset(left, right, N)) == expected


def test_sumset_without_generators_cannot_extend():
    A = IntSetBitmap.from_members([0, 1], 5)
    with pytest.raises(InvalidParameter):
        sumset(A, A, 10)


def test_scaled_sumset_examples():
    A = IntSetBitmap.from_members([0, 1], 5)
    assert list(scaled_sumset(A, 2)) == [0, 1, 2, 3]
    B = IntSetBitmap.from_members([0, 2, 3, 7], 20)
    assert scaled_sumset(B, 1) == sumset(B, B)

    C = fs_bitmap([1, 4, 13], 18)
    members = list(C)
    assert set(scaled_sumset(C, 2, 54)) == brute_sumset(members, members, 54, t=2)


@given(small_sets, st.integers(1, 5))
def test_scaled_sumset_matches_pairwise(A, t):
    N = 80
    S = scaled_sumset(IntSetBitmap.from_members(A, N), t)
    assert set(S) == brute_sumset(A, A, N, t=t)


def test_scaled_sumset_rejects_zero_scale():
    with pytest.raises(InvalidParameter):
        scaled_sumset(IntSetBitmap.from_members([0], 3), 0)


@pytest.mark.parametrize(
    "members, expected",
    [
        ([0, 1, 3, 4], [(1, 3)]),
        ([0, 2, 6, 8], [(0, 2), (2, 6), (6, 8)]),
        ([0, 1, 2, 3], []),
    ],
)
def test_gaps_examples(members, expected):
    found = gaps(IntSetBitmap.from_members(members, max(members)))
    assert found == [Gap(*g) for g in expected]


def test_gap_lengths():
    assert [g.length for g in gaps(cantor_level(2))] == [1, 3, 1]


@given(sets_with_zero)
def test_gaps_match_scan(members):
    found = gaps(IntSetBitmap.from_members(members, 40))
    assert [(g.left, g.right) for g in found] == brute_gaps(members)


def test_gaps_need_zero():
    with pytest.raises(InvalidParameter):
        gaps(IntSetBitmap.from_members([1, 2], 5))


def test_density_examples():
    assert density(IntSetBitmap.interval(0, 9, 9)) == 1
    assert density(IntSetBitmap.from_members([0], 9)) == Fraction(1, 10)
    C = fs_bitmap([1, 3, 6, 12], 22)
    assert density(C, 22) == Fraction(16, 23)
    assert density(C, 4) == Fraction(4, 5)
    with pytest.raises(InvalidParameter):
        density(C, 23)


def test_shift_invariance_examples():
    report = piecewise_shift_invariant(fs_bitmap([1, 3, 9], 13))
    assert report.passed
    assert report.first_violation is None
    assert piecewise_shift_invariant(IntSetBitmap.interval(0, 20, 20)).passed


def test_shift_invariance_failure_reports_gap():
    report = piecewise_shift_invariant(IntSetBitmap.from_members([0, 1, 2, 4, 5, 7], 7))
    assert not report.passed
    assert (report.first_violation.left, report.first_violation.right) == (2, 4)


@given(sets_with_zero)
def test_shift_invariance_matches_definition(members):
    report = piecewise_shift_invariant(IntSetBitmap.from_members(members, 40))
    passed, where = shift_oracle(members)
    assert report.passed == passed
    if not passed:
        assert (report.first_violation.left, report.first_violation.right) == where


def test_truncated_gaps_are_unresolved():
    report = piecewise_shift_invariant(fs_bitmap([1, 3, 9], 13))
    # (4, 9) 平移 9 后超出最大元 13
    assert [4, 9] in report.unresolved


def test_ruler_examples():
    assert ruler_sequence(8) == [1, 2, 1, 3, 1, 2, 1, 4]
    assert ruler_sequence(16)[-1] == 5
    assert ruler_sequence(16) == [1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1, 3, 1, 2, 1, 5]
    assert ruler_sequence(1) == [1]
    with pytest.raises(InvalidParameter):
        ruler_sequence(0)


def test_gap_indices_level_two():
    assert gap_indices(2) == [1, 2, 1]
    assert gap_indices(1) == [1]


@pytest.mark.parametrize("level", range(1, 11))
def test_gap_index_correspondence(level):
    assert gap_index_correspondence(level)
    assert len(gaps(cantor_level(level))) == 2**level - 1


def test_bitmap_basics():
    S = IntSetBitmap.from_members([0, 3, 5, 64, 65], 70)
    assert len(S) == 5
    assert 64 in S and 63 not in S and 71 not in S and -1 not in S
    assert S.max_member() == 65
    assert S.clip(10) == IntSetBitmap.from_members([0, 3, 5], 10)
    assert S.issubset(IntSetBitmap.interval(0, 70, 70))
    assert IntSetBitmap.from_bool_array(S.to_bool_array()) == S
    assert np.array_equal(S.members(), [0, 3, 5, 64, 65])
    assert list(IntSetBitmap.interval(3, 6, 10)) == [3, 4, 5, 6]


def test_bitmap_bound_checks():
    with pytest.raises(InvalidParameter):
        IntSetBitmap.from_members([-1], 4)
    with pytest.raises(InvalidParameter):
        IntSetBitmap(-1)
    with pytest.raises(InvalidParameter):
        IntSetBitmap(settings.MAX_BITMAP_BOUND + 1)


@given(small_sets, small_sets)
def test_sumset_commutes(A, B):
    left = IntSetBitmap.from_members(A, 60)
    right = IntSetBitmap.from_members(B, 60)
    assert sumset(left, right) == sumset(right, left)


@given(small_sets, small_sets, small_sets)
def test_sumset_is_monotone(A, B, extra):
    small = IntSetBitmap.from_members(A, 60)
    large = IntSetBitmap.from_members(A | extra, 60)
    other = IntSetBitmap.from_members(B, 60)
    assert sumset(small, other).issubset(sumset(large, other))


def test_membership_array_is_built_once():
    S = fs_bitmap([1, 3, 7, 15, 31, 63], 2 * 10**6)
    bits = S.to_bool_array()
    assert S.to_bool_array() is bits
    assert not bits.flags.writeable
    assert [x in S for x in (0, 1, 2, 4, 120, 2 * 10**6 + 1)] == [True, True, False, True, True, False]


def test_membership_lookups_do_not_scale_with_bound():
    S = fs_bitmap([2**i for i in range(23)], 8 * 10**6)
    rng = np.random.Generator(np.random.PCG64(5))
    xs = rng.integers(0, 8 * 10**6, size=20_000).tolist()
    started = time.perf_counter()
    assert all(x in S for x in xs)
    assert time.perf_counter() - started < 1.0
