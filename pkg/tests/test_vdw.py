import json

import pytest

from cantorsums.exceptions import InfeasibleSearch, InvalidParameter
from cantorsums.vdw import (
    Provenance,
    VdwTable,
    find_monochromatic_ap,
    inverse_vdw,
    verify_vdw_small,
)


def test_w_2_3_is_nine():
    certificate = verify_vdw_small(2, 3)
    assert certificate.W == 9
    assert certificate.verified
    assert len(certificate.witness_coloring) == 8
    assert find_monochromatic_ap(certificate.witness_coloring, 3) is None
    assert certificate.nodes_explored > 0


@pytest.mark.parametrize("k", [1, 2, 5, 9])
def test_one_color(k):
    assert verify_vdw_small(1, k).W == k


@pytest.mark.parametrize("s", [1, 2, 3, 7])
def test_two_term_progressions(s):
    certificate = verify_vdw_small(s, 2)
    assert certificate.W == s + 1
    assert find_monochromatic_ap(certificate.witness_coloring, 2) is None


def test_search_budget_is_enforced():
    with pytest.raises(InfeasibleSearch):
        verify_vdw_small(2, 4, node_budget=50)


def test_find_monochromatic_ap():
    assert find_monochromatic_ap([0, 1, 0, 1, 0], 3) == (0, 2)
    assert find_monochromatic_ap([0, 0, 1, 1, 0, 0, 1, 1], 3) is None


@pytest.mark.parametrize("s, N, expected", [(2, 9, 3), (1, 7, 7), (2, 8, 2), (2, 2, 1), (3, 4, 2)])
def test_inverse_vdw_examples(s, N, expected):
    assert inverse_vdw(s, N).length == expected


def test_inverse_vdw_flags_table_limit():
    lookup = inverse_vdw(2, 1000)
    assert lookup.length == 3
    assert lookup.table_limited
    assert not inverse_vdw(2, 8).table_limited


def test_literature_values_only_on_request():
    table = VdwTable()
    assert table.lookup(2, 4) is None
    assert table.lookup(2, 4, include_literature=True) == 35
    assert table.entry(2, 4).provenance is Provenance.LITERATURE
    assert table.inverse_vdw(2, 200, include_literature=True).length == 5


def test_external_table_is_loaded_as_literature(tmp_path):
    path = tmp_path / "vdw.json"
    path.write_text(
        json.dumps({"entries": [{"s": 2, "k": 3, "W": 10}, {"s": 5, "k": 3, "W": 170}]}),
        encoding="utf-8",
    )
    table = VdwTable(table_path=path)
    # 已验证条目不会被覆盖
    assert table.entry(2, 3).W == 9
    assert table.entry(2, 3).provenance is Provenance.VERIFIED
    assert table.entry(5, 3).provenance is Provenance.LITERATURE
    assert table.lookup(5, 3) is None
    assert table.lookup(5, 3, include_literature=True) == 170


def test_bad_external_row(tmp_path):
    path = tmp_path / "vdw.json"
    path.write_text(json.dumps([{"s": 2}]), encoding="utf-8")
    with pytest.raises(InvalidParameter):
        VdwTable(table_path=path)


def test_invalid_arguments():
    with pytest.raises(InvalidParameter):
        inverse_vdw(0, 5)
    with pytest.raises(InvalidParameter):
        verify_vdw_small(2, 0)


@pytest.mark.parametrize("include_literature", [False, True])
def test_inverse_vdw_is_monotone(include_literature):
    for s in range(1, 6):
        lengths = [inverse_vdw(s, N, include_literature).length for N in range(1, 1500)]
        assert lengths == sorted(lengths)
    for N in (1, 3, 9, 35, 76, 300, 1200):
        by_colors = [inverse_vdw(s, N, include_literature).length for s in range(1, 6)]
        assert by_colors == sorted(by_colors, reverse=True)
