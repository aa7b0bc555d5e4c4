from itertools import combinations
from typing import Iterable, List, Set

import pytest
from hypothesis import settings as hypothesis_settings

from cantorsums.digit_stream import DigitStream
from cantorsums.utils import SingletonMeta
from cantorsums.vdw import DefaultVdwTable

hypothesis_settings.register_profile("default", max_examples=60, deadline=None)
hypothesis_settings.load_profile("default")

RATIONALS = ["3/2", "5/3", "7/4", "13/8", "27/16"]


def brute_fs(B: Iterable[int], N: int) -> Set[int]:
    """All subset sums ≤ N by enumerating subsets."""
    B = list(B)
    sums = set()
    for size in range(len(B) + 1):
        for combo in combinations(B, size):
            total = sum(combo)
            if total <= N:
                sums.add(total)
    return sums


def brute_sumset(A: Iterable[int], B: Iterable[int], N: int, t: int = 1) -> Set[int]:
    return {a + t * b for a in A for b in B if a + t * b <= N}


def brute_gaps(members: List[int]):
    members = sorted(members)
    return [(a, b) for a, b in zip(members, members[1:]) if b - a >= 2]


@pytest.fixture
def alpha_3_2_p2() -> DigitStream:
    return DigitStream.rational("3/2", 2)


@pytest.fixture
def alpha_3_2_p3() -> DigitStream:
    return DigitStream.rational("3/2", 3)


@pytest.fixture
def alpha_5_3_p2() -> DigitStream:
    return DigitStream.rational("5/3", 2)


@pytest.fixture(autouse=True)
def fresh_default_table():
    # 每个用例重新读取 CSL_TABLE_PATH
    SingletonMeta.reset(DefaultVdwTable)
    yield
    SingletonMeta.reset(DefaultVdwTable)
