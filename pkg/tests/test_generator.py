from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cantorsums.digit_stream import DigitStream, RationalAlpha
from cantorsums.exceptions import InvalidParameter
from cantorsums.generator import (
    LEMMA_WINDOW,
    GeneratorTable,
    build_table,
    complement_in_prefix,
    floor_power_oracle,
    verify_lemma_2_2,
)


def test_table_for_three_halves_base_two(alpha_3_2_p2):
    table = build_table(alpha_3_2_p2, 4)
    assert table.terms == [1, 3, 6, 12, 24]
    assert table.partial_sums == [1, 4, 10, 22, 46]
    assert table.deltas.tolist() == [1, 2, 2, 2, 2]


def test_table_for_five_thirds_base_two(alpha_5_3_p2):
    table = build_table(alpha_5_3_p2, 4)
    assert table.digits.tolist() == [1, 1, 0, 1, 0]
    assert table.terms == [1, 3, 6, 13, 26]


def test_table_for_three_halves_base_three(alpha_3_2_p3):
    table = build_table(alpha_3_2_p3, 3)
    assert table.terms == [1, 4, 13, 40]
    assert table.deltas.tolist() == [1, 2, 3, 4]


@pytest.mark.parametrize("alpha, p, n", [("3/2", 2, 4), ("3/2", 3, 3), ("7/4", 5, 0)])
def test_lemma_2_2_examples(alpha, p, n):
    check = verify_lemma_2_2(build_table(DigitStream.rational(alpha, p), n))
    assert check.passed
    assert check.first_failure is None
    assert check.deltas[0] == 1


def test_lemma_2_2_deltas_match_examples(alpha_3_2_p2, alpha_3_2_p3):
    assert verify_lemma_2_2(build_table(alpha_3_2_p2, 4)).deltas == [1, 2, 2, 2, 2]
    assert verify_lemma_2_2(build_table(alpha_3_2_p3, 3)).deltas == [1, 2, 3, 4]


@pytest.mark.parametrize(
    "alpha, p, n, expected", [("3/2", 2, 3, 12), ("5/3", 2, 3, 13), ("13/8", 7, 0, 1)]
)
def test_floor_power_oracle(alpha, p, n, expected):
    assert floor_power_oracle(RationalAlpha.parse(alpha), p, n) == expected


@given(
    st.integers(2, 60).flatmap(
        lambda den: st.tuples(st.integers(den + 1, 2 * den - 1), st.just(den))
    ),
    st.sampled_from([2, 3, 5, 10]),
    st.integers(0, 200),
)
def test_recursion_matches_floor_oracle(pair, p, n):
    value = Fraction(*pair)
    alpha = RationalAlpha(value.numerator, value.denominator)
    table = build_table(DigitStream.rational(alpha, p), n)
    assert table.terms == [floor_power_oracle(alpha, p, k) for k in range(n + 1)]
    assert verify_lemma_2_2(table).passed


def test_terms_strictly_increase_for_random_stream():
    table = build_table(DigitStream.seeded(11, 3), 300)
    assert all(b > a for a, b in zip(table.terms, table.terms[1:]))
    assert verify_lemma_2_2(table).passed


def test_deltas_only_table_refuses_big_integer_access():
    table = build_table(DigitStream.seeded(3, 10), 50_000, materialize=False)
    assert not table.materialized
    assert len(table.deltas) == 50_001
    check = verify_lemma_2_2(table)
    assert check.passed
    assert check.checked_up_to == LEMMA_WINDOW
    assert len(check.deltas) == 50_001
    with pytest.raises(InvalidParameter):
        table.s(3)


def test_complement_in_prefix(alpha_3_2_p2):
    table = build_table(alpha_3_2_p2, 3)
    rest = complement_in_prefix({1}, 3)
    assert rest == {0, 2, 3}
    assert table.subset_sum({1}) == 3
    assert table.subset_sum(rest) == 19 == table.s(3) - 3
    assert complement_in_prefix(set(), 4) == {0, 1, 2, 3, 4}
    assert complement_in_prefix(range(5), 4) == set()


def test_complement_rejects_out_of_range_index():
    with pytest.raises(InvalidParameter):
        complement_in_prefix({5}, 3)


def test_table_report_emits_big_integers_as_strings(alpha_5_3_p2):
    report = build_table(alpha_5_3_p2, 4).to_report()
    assert report["x"] == ["1", "3", "6", "13", "26"]
    assert report["delta"] == [1, 2, 2, 3, 3]
    assert report["alpha"] == "5/3"


def test_negative_depth_is_rejected(alpha_3_2_p2):
    with pytest.raises(InvalidParameter):
        build_table(alpha_3_2_p2, -1)


def test_deltas_only_check_catches_a_wrong_delta():
    table = build_table(DigitStream.seeded(3, 10), 50, materialize=False)
    wrong = table.deltas.copy()
    wrong[7] += 1
    forged = GeneratorTable(stream=table.stream, n=table.n, digits=table.digits, deltas=wrong)
    check = verify_lemma_2_2(forged)
    assert not check.passed
    assert check.first_failure == 7
