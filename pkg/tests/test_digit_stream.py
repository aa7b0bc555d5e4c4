from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cantorsums.digit_stream import (
    DigitStream,
    RationalAlpha,
    digit_prefix_sums,
    digits_value,
    expand_rational,
    random_stream,
)
from cantorsums.exceptions import InvalidParameter


@st.composite
def rational_alphas(draw):
    den = draw(st.integers(2, 200))
    num = draw(st.integers(den + 1, 2 * den - 1))
    value = Fraction(num, den)
    return RationalAlpha(value.numerator, value.denominator)


@pytest.mark.parametrize(
    "alpha, p, n, expected",
    [
        ("3/2", 2, 4, [1, 1, 0, 0, 0]),
        ("5/3", 2, 5, [1, 1, 0, 1, 0, 1]),
        ("3/2", 3, 3, [1, 1, 1, 1]),
    ],
)
def test_expand_rational_examples(alpha, p, n, expected):
    assert expand_rational(RationalAlpha.parse(alpha), p, n) == expected


@pytest.mark.parametrize("text", ["1/1", "4/4", "2/1", "1/2", "7/3", "abc", "3/0"])
def test_alpha_outside_open_interval_is_rejected(text):
    with pytest.raises(InvalidParameter) as info:
        RationalAlpha.parse(text)
    assert info.value.flag == "--alpha"


def test_alpha_must_be_reduced():
    with pytest.raises(InvalidParameter):
        RationalAlpha(6, 4)
    assert RationalAlpha.parse("6/4") == RationalAlpha(3, 2)


@pytest.mark.parametrize("p", [0, 1, -3])
def test_radix_below_two_is_rejected(p):
    with pytest.raises(InvalidParameter):
        expand_rational(RationalAlpha(3, 2), p, 4)
    with pytest.raises(InvalidParameter):
        random_stream(1, p, 4)


@given(rational_alphas(), st.sampled_from([2, 3, 5, 10]), st.integers(0, 80))
def test_expansion_digits_in_range_and_converge(alpha, p, n):
    digits = expand_rational(alpha, p, n)
    assert digits[0] == 1
    assert len(digits) == n + 1
    assert all(0 <= d < p for d in digits)
    # 截断值从下方逼近 α，误差小于 p^{-n}
    value = digits_value(digits, p)
    assert value <= alpha.value < value + Fraction(1, p**n)


def test_random_stream_base_case_and_determinism():
    assert random_stream(12345, 2, 0) == [1]
    assert random_stream(99, 5, 500) == random_stream(99, 5, 500)
    assert random_stream(99, 5, 500) != random_stream(100, 5, 500)


def test_seeded_stream_is_prefix_stable():
    long = DigitStream.seeded(7, 5).digits(300)
    short = DigitStream.seeded(7, 5).digits(120)
    assert long[:121] == short


def test_seeded_stream_has_uniform_digits():
    digits = np.asarray(random_stream(2024, 5, 100_000)[1:])
    counts = np.bincount(digits, minlength=5) / len(digits)
    assert np.all(np.abs(counts - 0.2) < 0.01)


def test_seed_must_fit_in_64_bits():
    with pytest.raises(InvalidParameter) as info:
        DigitStream.seeded(-1, 3)
    assert info.value.flag == "--seed"
    with pytest.raises(InvalidParameter):
        random_stream(2**64, 3, 5)
    assert len(DigitStream.seeded(2**64 - 1, 3).digits(4)) == 5


@pytest.mark.slow
def test_seeded_stream_frequencies_at_one_million():
    digits = np.asarray(random_stream(31337, 5, 10**6)[1:])
    counts = np.bincount(digits, minlength=5) / len(digits)
    assert np.all(np.abs(counts - 0.2) < 0.005)


@pytest.mark.parametrize(
    "digits, expected",
    [([1, 1, 0, 0], [1, 2, 2, 2]), ([1, 1, 0, 1], [1, 2, 2, 3]), ([1], [1])],
)
def test_digit_prefix_sums(digits, expected):
    assert digit_prefix_sums(digits) == expected


def test_digit_stream_caches_read_only_prefix():
    stream = DigitStream.rational("5/3", 2)
    first = stream.digits_array(10)
    assert not first.flags.writeable
    assert stream.digits(5) == [1, 1, 0, 1, 0, 1]
    assert stream.approx_alpha() == Fraction(5, 3)
    assert stream.describe() == {"p": 2, "alpha": "5/3"}


def test_digit_stream_needs_exactly_one_source():
    with pytest.raises(InvalidParameter):
        DigitStream(2)
    with pytest.raises(InvalidParameter):
        DigitStream(2, alpha=RationalAlpha(3, 2), seed=1)


def test_approx_alpha_of_random_stream_is_in_range():
    stream = DigitStream.seeded(5, 3)
    assert 1 <= stream.approx_alpha() < 2
    assert stream.describe() == {"p": 3, "seed": 5}
