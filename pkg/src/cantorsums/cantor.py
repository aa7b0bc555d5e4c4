"""
Cantor-type sequences as subset sums: generator sets realising the prefix
families P1–P4, the super-increasing converse, and greedy recovery of the
generators from a (truncated) set.
"""

from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import List, Optional, Sequence, Tuple

from cantorsums.exceptions import InvalidParameter, NotSubsetSumSet, PreconditionViolation
from cantorsums.intset import (
    IntSetBitmap,
    fs_bitmap,
    piecewise_shift_invariant,
    subset_sum_mask,
    sumset,
)
from cantorsums.log import logger
from cantorsums.schemas import RecoveryReport, ShiftInvarianceReport


class Family(str, Enum):
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    P4 = "P4"


# 前缀 {0, …, top}：P1..P3 的 top 固定，P4 的 top 是 r
_FIXED_TOP = {Family.P1: 1, Family.P2: 3, Family.P3: 7}


@dataclass(frozen=True)
class PrefixSpec:
    family: Family
    k: int
    r: Optional[int] = None

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        if family is Family.P4:
            if self.r is None or self.r < 10:
                raise InvalidParameter(f"P4 needs r >= 10, got {self.r}", flag="--r")
            if self.k <= self.r + 1:
                raise InvalidParameter(f"P4 needs k > r + 1 = {self.r + 1}, got {self.k}", flag="--k")
        else:
            # P1: k > 2, P2: k > 4, P3: k > 8
            minimum = _FIXED_TOP[family] + 1
            if self.k <= minimum:
                raise InvalidParameter(f"{family.value} needs k > {minimum}, got {self.k}", flag="--k")

    @property
    def top(self) -> int:
        """Last element before the first gap."""
        return self.r if self.family is Family.P4 else _FIXED_TOP[self.family]

    def prefix(self) -> List[int]:
        return list(range(self.top + 1)) + [self.k]


@dataclass(frozen=True)
class GeneratorSet:
    elements: Tuple[int, ...]
    repaired: bool = False

    def __post_init__(self):
        previous = 0
        for b in self.elements:
            if b <= previous:
                raise InvalidParameter(f"generator set must be increasing and positive: {self.elements}")
            previous = b

    def tail(self, count: int) -> "GeneratorSet":
        """Append ``count`` doublings of the last element (super-increasing continuation)."""
        elements = list(self.elements)
        for _ in range(count):
            elements.append(2 * elements[-1])
        return GeneratorSet(tuple(elements), self.repaired)

    def to_list(self) -> List[int]:
        return list(self.elements)


def _contiguous(small: Sequence[int], top: int) -> bool:
    return subset_sum_mask(small, top) == (1 << (top + 1)) - 1


def _p4_generators(r: int) -> Tuple[List[int], bool]:
    n = 1
    while comb(n + 2, 2) <= r:
        n += 1
    s = r - comb(n + 1, 2)
    small = list(range(1, n)) + [n + s]
    if _contiguous(small, r):
        return small, False
    # n + s overshoots FS({1..n−1}) + 1; move part of the surplus onto n−1
    for a in range(1, s + 1):
        candidate = list(range(1, n - 1)) + [n - 1 + a, n + s - a]
        if candidate[-2] < candidate[-1] and _contiguous(candidate, r):
            logger.warning(f"P4 r={r}: {small} leaves a hole, using {candidate}")
            return candidate, True
    raise AssertionError(f"no contiguous generator set found for P4 r={r}")


def construct_B(spec: PrefixSpec) -> GeneratorSet:
    """Finite B whose subset sums start with the prefix of ``spec``.

    Zeros in the textbook B-sets contribute nothing to FS and are dropped.
    """
    if spec.family is Family.P1:
        small, repaired = [1], False
    elif spec.family is Family.P2:
        small, repaired = [1, 2], False
    elif spec.family is Family.P3:
        small, repaired = [1, 2, 4], False
    else:
        small, repaired = _p4_generators(spec.r)
    return GeneratorSet(tuple(small + [spec.k]), repaired)


def fs_prefix(B: GeneratorSet, spec: PrefixSpec) -> List[int]:
    """FS(B) ∩ [0, k]."""
    return fs_bitmap(B.to_list(), spec.k).members().tolist()


def check_prefix_condition(n: int) -> bool:
    """C(n+1, 2) − n ≥ C(n+2, 2) − C(n+1, 2)."""
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}", flag="--n")
    return comb(n + 1, 2) - n >= comb(n + 2, 2) - comb(n + 1, 2)


def superincreasing(B: Sequence[int]) -> Optional[int]:
    """None when b₁ = 1 and each element exceeds the sum of its predecessors;
    otherwise the 1-based index of the first violation."""
    if not B:
        return None
    if B[0] != 1:
        return 1
    total = 0
    for i, b in enumerate(B, start=1):
        if b <= total:
            return i
        total += b
    return None


def _shift_and_decompose(B: Sequence[int], N: int) -> ShiftInvarianceReport:
    report = piecewise_shift_invariant(fs_bitmap(list(B), N))
    if not report.passed:
        return report

    previous = fs_bitmap([], N)
    for depth in range(1, len(B) + 1):
        current = fs_bitmap(list(B[:depth]), N)
        pair = IntSetBitmap.from_members([0, B[depth - 1]], N)
        # strip generators so the sumset goes through the shift-or path
        stepped = sumset(IntSetBitmap(N, previous.mask), pair, N)
        if stepped != current:
            logger.error(f"FS decomposition fails at depth {depth} for B = {list(B)}")
            return report.model_copy(update={"passed": False})
        previous = current
    return report


def verify_converse(B: Sequence[int], N: int) -> ShiftInvarianceReport:
    """FS(B) is piecewise shift invariant on [0, N] and decomposes level by level."""
    violation = superincreasing(B)
    if violation is not None:
        raise PreconditionViolation(f"B = {list(B)} is not super-increasing at index {violation}")
    return _shift_and_decompose(B, N)


# k, 2k, 4k 已覆盖截断上界 4k
CONSTRUCTION_TAIL = 2


def verify_construction(spec: PrefixSpec) -> ShiftInvarianceReport:
    """construct_B(spec) extended by its doubling tail, checked on [0, 4k].

    P1–P3 sets are super-increasing and go through verify_converse. P4 small
    generators {1, …, n−1, n+s} are not, so the shift property and the FS
    decomposition are checked directly; their FS is the interval [0, r] and
    the tail turns it into the evenly spaced copies [jk, jk + r].
    """
    B = construct_B(spec).tail(CONSTRUCTION_TAIL).to_list()
    N = 4 * spec.k
    if superincreasing(B) is None:
        return verify_converse(B, N)
    return _shift_and_decompose(B, N)


def recover_generators(A: IntSetBitmap) -> RecoveryReport:
    """Greedy: repeatedly take the least member not yet a subset sum."""
    if 0 not in A or 1 not in A:
        raise InvalidParameter("recovery needs 0 and 1 in the set")
    N = A.bound
    full = (1 << (N + 1)) - 1
    generators: List[int] = []
    reach = 1
    while True:
        fresh = A.mask & ~reach
        if not fresh:
            break
        g = (fresh & -fresh).bit_length() - 1
        generators.append(g)
        reach = (reach | (reach << g)) & full

    mismatch = (reach ^ A.mask) & full
    first = (mismatch & -mismatch).bit_length() - 1 if mismatch else None
    report = RecoveryReport(
        generators=generators, resolvable_bound=N, valid=first is None, first_mismatch=first
    )
    if first is not None:
        logger.info(f"recovered {generators} but FS differs from A at {first}")
    return report


def recover_or_raise(A: IntSetBitmap) -> GeneratorSet:
    report = recover_generators(A)
    if not report.valid:
        raise NotSubsetSumSet(
            f"not a subset-sum set on [0, {report.resolvable_bound}]: "
            f"FS({report.generators}) and A differ at {report.first_mismatch}"
        )
    return GeneratorSet(tuple(report.generators))
