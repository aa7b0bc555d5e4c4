"""
Arithmetic progressions in integer sets: exact longest AP, and the
bounded-gap extraction that colors blocks of length K by the offset of
their first element and reads a monochromatic progression back into Z.
"""

from typing import List, Optional, Sequence

import numpy as np

from cantorsums.exceptions import GapBoundViolation, InvalidParameter
from cantorsums.log import logger
from cantorsums.schemas import APWitness
from cantorsums.utils import seeded_rng
from cantorsums.vdw import VdwTable, default_table


def _stride_runs(flags: np.ndarray, d: int) -> np.ndarray:
    """run[i] = length of the all-True chain i, i−d, i−2d, … ending at i."""
    size = len(flags)
    rows = -(-size // d)
    padded = np.zeros(rows * d, dtype=np.int64)
    padded[:size] = flags
    grid = padded.reshape(rows, d)
    totals = np.cumsum(grid, axis=0)
    resets = np.maximum.accumulate(np.where(grid == 0, totals, 0), axis=0)
    return (totals - resets).reshape(-1)[:size]


def _as_increasing(Z: Sequence[int]) -> List[int]:
    values = [int(z) for z in Z]
    if not values:
        raise InvalidParameter("progression search needs a non-empty set")
    for i in range(len(values) - 1):
        if values[i + 1] <= values[i]:
            raise InvalidParameter(f"set must be strictly increasing, z[{i}]={values[i]} >= z[{i + 1}]")
    return values


# 跨度不超过 |Z| 的这个倍数时走按步长扫描的 numpy 快速路径
DENSE_SPAN_FACTOR = 16


def longest_ap(Z: Sequence[int]) -> APWitness:
    """Longest AP inside Z; ties go to the smallest diff, then smallest start.

    Dense sets (span ≤ DENSE_SPAN_FACTOR·|Z|) are scanned diff by diff over a
    membership array; anything else runs the O(|Z|²) pair DP, so the cost
    never depends on the span alone.
    """
    values = _as_increasing(Z)
    span = values[-1] - values[0]
    if span == 0:
        return APWitness(start=values[0], diff=1, length=1)
    if span <= DENSE_SPAN_FACTOR * len(values):
        return _longest_ap_dense(values)
    return _longest_ap_pairs(values)


def _longest_ap_pairs(values: List[int]) -> APWitness:
    """ends[j][d] = length of the longest AP with diff d ending at values[j]."""
    ends: List[dict] = []
    best_start, best_diff, best_len = values[0], 1, 1
    for j, z in enumerate(values):
        row = {}
        for i in range(j):
            d = z - values[i]
            length = ends[i].get(d, 1) + 1
            row[d] = length
            start = z - (length - 1) * d
            if (-length, d, start) < (-best_len, best_diff, best_start):
                best_start, best_diff, best_len = start, d, length
        ends.append(row)
    return APWitness(start=best_start, diff=best_diff, length=best_len)


def _longest_ap_dense(values: List[int]) -> APWitness:
    """Differences are scanned upwards, each with a run-length pass over the
    membership array; a diff d can only beat length L when d·L ≤ span."""
    origin = values[0]
    span = values[-1] - origin
    member = np.zeros(span + 1, dtype=bool)
    member[np.asarray([v - origin for v in values], dtype=np.int64)] = True

    best_start, best_diff, best_len = origin, 1, 1
    d = 1
    while d * best_len <= span:
        runs = _stride_runs(member, d)
        longest = int(runs.max())
        if longest > best_len:
            end = int(np.argmax(runs))
            best_len = longest
            best_diff = d
            best_start = origin + end - (longest - 1) * d
        d += 1
    return APWitness(start=best_start, diff=best_diff, length=best_len)


def check_gap_bound(Z: Sequence[int], K: int) -> List[int]:
    if K < 1:
        raise InvalidParameter(f"gap bound K must be >= 1, got {K}", flag="--K")
    values = [int(z) for z in Z]
    if not values:
        raise InvalidParameter("bounded-gap set must be non-empty")
    for i in range(len(values) - 1):
        gap = values[i + 1] - values[i]
        if not 1 <= gap <= K:
            raise GapBoundViolation(i, gap, K)
    return values


def block_coloring(Z: Sequence[int], K: int) -> np.ndarray:
    """χ(i) = (first element of Z − z₁ in [iK, (i+1)K)) − iK for i < ⌊m/K⌋."""
    values = np.asarray(Z, dtype=np.int64) - int(Z[0])
    blocks = len(values) // K
    starts = K * np.arange(blocks, dtype=np.int64)
    firsts = values[np.searchsorted(values, starts, side="left")]
    colors = firsts - starts
    if blocks and (colors.min() < 0 or colors.max() >= K):
        raise AssertionError("empty block despite the gap bound")
    return colors


def _find_monochromatic(colors: np.ndarray, target: int) -> Optional[tuple]:
    """First (diff, start) in the coloring carrying a monochromatic AP of ``target`` terms."""
    size = len(colors)
    if target <= 1:
        return (1, 0) if size else None
    d = 1
    while (target - 1) * d <= size - 1:
        same = colors[d:] == colors[:-d]
        runs = _stride_runs(same, d)
        hits = np.flatnonzero(runs >= target - 1)
        if len(hits):
            start = int(hits[0]) - (target - 2) * d
            return d, start
        d += 1
    return None


def lemma23_extract(
    Z: Sequence[int],
    K: int,
    table: Optional[VdwTable] = None,
    include_literature: bool = False,
) -> APWitness:
    """AP of length ≥ w(K, ⌊m/K⌋) inside a set whose gaps are at most K."""
    values = check_gap_bound(Z, K)
    table = table or default_table()
    m = len(values)
    blocks = m // K
    if blocks == 0:
        return APWitness(start=values[0], diff=1, length=1)

    colors = block_coloring(values, K)
    target = table.inverse_vdw(K, blocks, include_literature).length
    found = _find_monochromatic(colors, target)
    if found is None:
        raise AssertionError(
            f"no monochromatic AP of length {target} among {blocks} blocks with {K} colors"
        )
    d, start = found
    color = int(colors[start])
    end = start + (target - 1) * d
    # 尽量延长
    while start - d >= 0 and colors[start - d] == color:
        start -= d
    while end + d < blocks and colors[end + d] == color:
        end += d
    length = (end - start) // d + 1

    witness = APWitness.within(
        values, start=values[0] + K * start + color, diff=K * d, length=length
    )
    logger.debug(
        f"lemma23: m={m}, K={K}, target={target}, found length {length} with diff {K * d}"
    )
    return witness


def bounded_gap_set(seed: int, m: int, K: int, start: int = 0) -> List[int]:
    """m increasing integers with consecutive gaps uniform on [1, K]."""
    if m < 1 or K < 1:
        raise InvalidParameter(f"bounded_gap_set needs m, K >= 1, got ({m}, {K})")
    rng = seeded_rng(seed)
    steps = rng.integers(1, K + 1, size=m - 1, dtype=np.int64)
    return (start + np.concatenate([[0], np.cumsum(steps)])).tolist()
