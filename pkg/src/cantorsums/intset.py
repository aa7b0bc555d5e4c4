"""
Exact set arithmetic on [0, N].

A set is held as one arbitrary-precision int used as a bitmask (bit i set
iff i is a member), so FS(B) and sumsets are shift-or loops running at C
speed over 30-bit limbs. Bulk scans (gaps, members) go through numpy.
"""

from fractions import Fraction
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from cantorsums.config import settings
from cantorsums.exceptions import InvalidParameter
from cantorsums.log import logger
from cantorsums.schemas import ShiftInvarianceReport, ShiftViolation


def _full(bound: int) -> int:
    return (1 << (bound + 1)) - 1


def _check_bound(bound: int) -> int:
    if bound < 0:
        raise InvalidParameter(f"bound N must be >= 0, got {bound}", flag="--N")
    if bound > settings.MAX_BITMAP_BOUND:
        raise InvalidParameter(
            f"bound N={bound} exceeds MAX_BITMAP_BOUND={settings.MAX_BITMAP_BOUND}",
            flag="--N",
        )
    return bound


class Gap(NamedTuple):
    """Open interval (left, right) of missing integers; both ends are members."""

    left: int
    right: int

    @property
    def length(self) -> int:
        # number of missing integers
        return self.right - self.left - 1


class IntSetBitmap:
    __slots__ = ("bound", "mask", "generators", "_bits")

    def __init__(self, bound: int, mask: int = 0, generators: Optional[Tuple[int, ...]] = None):
        self.bound = _check_bound(bound)
        self.mask = mask & _full(bound)
        # 若由 FS(generators) 构造，保留生成元（多重集）以便走快速求和路径
        self.generators = generators
        # 成员查询用的只读 bool 数组，首次使用时生成
        self._bits: Optional[np.ndarray] = None

    @classmethod
    def from_members(cls, members: Iterable[int], bound: int) -> "IntSetBitmap":
        mask = 0
        for m in members:
            if m < 0:
                raise InvalidParameter(f"negative member {m}")
            if m <= bound:
                mask |= 1 << m
        return cls(bound, mask)

    @classmethod
    def interval(cls, lo: int, hi: int, bound: int) -> "IntSetBitmap":
        if lo > hi:
            return cls(bound)
        return cls(bound, _full(hi) ^ _full(lo - 1) if lo > 0 else _full(hi))

    @classmethod
    def from_bool_array(cls, bits: np.ndarray, bound: Optional[int] = None) -> "IntSetBitmap":
        bound = len(bits) - 1 if bound is None else bound
        packed = np.packbits(np.asarray(bits, dtype=bool), bitorder="little")
        return cls(bound, int.from_bytes(packed.tobytes(), "little"))

    def to_bool_array(self) -> np.ndarray:
        """Read-only membership array of length N + 1, built once per bitmap."""
        if self._bits is None:
            nbytes = (self.bound + 8) // 8
            raw = np.frombuffer(self.mask.to_bytes(nbytes, "little"), dtype=np.uint8)
            bits = np.unpackbits(raw, bitorder="little")[: self.bound + 1].astype(bool)
            bits.setflags(write=False)
            self._bits = bits
        return self._bits

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.to_bool_array())

    def max_member(self) -> int:
        return self.mask.bit_length() - 1

    def clip(self, bound: int) -> "IntSetBitmap":
        if bound > self.bound:
            raise InvalidParameter(f"cannot clip to {bound} > bound {self.bound}", flag="--N")
        return IntSetBitmap(bound, self.mask, self.generators)

    def issubset(self, other: "IntSetBitmap") -> bool:
        return self.mask & ~other.mask == 0

    def __contains__(self, x: int) -> bool:
        return 0 <= x <= self.bound and bool(self.to_bool_array()[x])

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.members().tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntSetBitmap):
            return NotImplemented
        return self.bound == other.bound and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((self.bound, self.mask))

    def __repr__(self) -> str:
        if len(self) <= 16:
            return f"IntSetBitmap(N={self.bound}, {{{', '.join(map(str, self))}}})"
        return f"IntSetBitmap(N={self.bound}, |S|={len(self)})"


def subset_sum_mask(terms: Iterable[int], bound: int) -> int:
    """Reachability mask of all subset sums of a multiset of positive terms."""
    full = _full(bound)
    mask = 1
    for b in terms:
        if b <= bound:
            mask |= (mask << b) & full
    return mask


def fs_bitmap(B: Sequence[int], N: int) -> IntSetBitmap:
    previous = 0
    for b in B:
        if b < 1 or b <= previous:
            raise InvalidParameter(f"generators must be increasing positive integers, got {list(B)}")
        previous = b
    _check_bound(N)
    bitmap = IntSetBitmap(N, subset_sum_mask(B, N), tuple(B))
    logger.debug(f"FS of {len(B)} generators on [0, {N}]: {len(bitmap)} members")
    return bitmap


def _result_bound(A: IntSetBitmap, B: IntSetBitmap, N: Optional[int]) -> int:
    exact = min(A.bound, B.bound)
    if N is None:
        return exact
    if N > exact and (A.generators is None or B.generators is None):
        raise InvalidParameter(
            f"operands are only known on [0, {exact}], cannot form the sumset up to {N}",
            flag="--N",
        )
    return _check_bound(N)


def sumset(A: IntSetBitmap, B: IntSetBitmap, N: Optional[int] = None) -> IntSetBitmap:
    """A + B on [0, N].

    FS(B) + FS(B′) = FS(B ⊎ B′), so operands that remember their generators
    are summed by the subset-sum DP over the merged multiset; anything else
    ORs shifted copies of the denser operand over the members of the sparser.
    """
    N = _result_bound(A, B, N)
    if A.generators is not None and B.generators is not None:
        merged = tuple(sorted(A.generators + B.generators))
        return IntSetBitmap(N, subset_sum_mask(merged, N), merged)

    sparse, dense = (A, B) if len(A) <= len(B) else (B, A)
    full = _full(N)
    dense_mask = dense.mask & full
    result = 0
    for m in sparse.members().tolist():
        if m > N:
            break
        result |= dense_mask << m
    return IntSetBitmap(N, result & full)


def scaled_sumset(A: IntSetBitmap, t: int, N: Optional[int] = None) -> IntSetBitmap:
    """{a + t·b : a, b ∈ A} on [0, N]."""
    if t < 1:
        raise InvalidParameter(f"scale t must be >= 1, got {t}", flag="--t")
    if N is None:
        N = A.bound
    elif N > A.bound and A.generators is None:
        raise InvalidParameter(
            f"operand is only known on [0, {A.bound}], cannot scale-sum up to {N}", flag="--N"
        )
    _check_bound(N)
    if A.generators is not None:
        merged = tuple(sorted(A.generators + tuple(t * g for g in A.generators)))
        return IntSetBitmap(N, subset_sum_mask(merged, N), merged)

    full = _full(N)
    base = A.mask & full
    result = 0
    for b in A.members().tolist():
        if t * b > N:
            break
        result |= base << (t * b)
    return IntSetBitmap(N, result & full)


def gap_arrays(S: IntSetBitmap) -> Tuple[np.ndarray, np.ndarray]:
    """Left and right endpoints of every gap, as int64 arrays."""
    if 0 not in S:
        raise InvalidParameter("gap extraction needs 0 in the set")
    members = S.members()
    idx = np.flatnonzero(np.diff(members) >= 2)
    return members[idx], members[idx + 1]


def gaps(S: IntSetBitmap) -> List[Gap]:
    lefts, rights = gap_arrays(S)
    return [Gap(left, right) for left, right in zip(lefts.tolist(), rights.tolist())]


def density(S: IntSetBitmap, N: Optional[int] = None) -> Fraction:
    """|S ∩ [0, N]| / (N + 1)."""
    N = S.bound if N is None else N
    if not 0 <= N <= S.bound:
        raise InvalidParameter(f"density bound {N} outside [0, {S.bound}]", flag="--N")
    return Fraction((S.mask & _full(N)).bit_count(), N + 1)


def piecewise_shift_invariant(S: IntSetBitmap) -> ShiftInvarianceReport:
    """Check the shift property gap by gap.

    For gap (β, γ) of length L, α is the right end of the nearest gap to the
    left with length ≥ L (0 if none) and t = γ − α. The block S ∩ [α, β]
    must land in S after adding t, and (β+t, γ+t) must be missing from S.
    Only the part of both images up to the last member can be checked; a gap
    whose images reach past it without a visible failure is reported as
    unresolved.
    """
    lefts, rights = gap_arrays(S)
    lengths = rights - lefts - 1
    last = S.max_member()
    bits = S.to_bool_array()

    unresolved: List[List[int]] = []
    stack: List[int] = []
    checked = 0
    for i, (beta, gamma, length) in enumerate(
        zip(lefts.tolist(), rights.tolist(), lengths.tolist())
    ):
        while stack and lengths[stack[-1]] < length:
            stack.pop()
        alpha = int(rights[stack[-1]]) if stack else 0
        stack.append(i)

        t = gamma - alpha
        visible = min(beta + t, last)
        block = bits[alpha : visible - t + 1]
        image = bits[alpha + t : visible + 1]
        if np.any(block & ~image):
            offset = int(np.flatnonzero(block & ~image)[0])
            return ShiftInvarianceReport(
                passed=False,
                gaps_checked=checked + 1,
                first_violation=ShiftViolation(
                    left=beta,
                    right=gamma,
                    reason=f"{alpha + offset} + {t} = {alpha + offset + t} is not a member",
                ),
                unresolved=unresolved,
            )
        hole = bits[beta + t + 1 : min(gamma + t, last + 1)]
        if hole.any():
            hit = beta + t + 1 + int(np.flatnonzero(hole)[0])
            return ShiftInvarianceReport(
                passed=False,
                gaps_checked=checked + 1,
                first_violation=ShiftViolation(
                    left=beta,
                    right=gamma,
                    reason=f"shifted gap ({beta + t}, {gamma + t}) contains member {hit}",
                ),
                unresolved=unresolved,
            )
        if gamma + t > last:
            unresolved.append([beta, gamma])
        else:
            checked += 1
    if unresolved:
        logger.debug(f"{len(unresolved)} gaps unresolved at N={S.bound}")
    return ShiftInvarianceReport(passed=True, gaps_checked=checked, unresolved=unresolved)


def ruler_sequence(n: int) -> List[int]:
    """1 + 2-adic valuation of k for k = 1..n (OEIS A001511)."""
    if n < 1:
        raise InvalidParameter(f"ruler length must be >= 1, got {n}", flag="--n")
    return [(k & -k).bit_length() for k in range(1, n + 1)]


def cantor_level(level: int) -> IntSetBitmap:
    """Dₗ = FS({2·3ⁱ : i < level}) on [0, 3ˡ − 1]."""
    if level < 1:
        raise InvalidParameter(f"level must be >= 1, got {level}", flag="--level")
    return fs_bitmap([2 * 3**i for i in range(level)], 3**level - 1)


def gap_indices(level: int) -> List[Optional[int]]:
    """Index j of every gap of Dₗ from left to right (length 3^{j−1} ↦ j).

    Lengths that are not powers of 3 map to None.
    """
    indices: List[Optional[int]] = []
    for gap in gaps(cantor_level(level)):
        length, j = gap.length, 1
        while length > 1 and length % 3 == 0:
            length //= 3
            j += 1
        indices.append(j if length == 1 else None)
    return indices


def gap_index_correspondence(level: int) -> bool:
    indices = gap_indices(level)
    expected = ruler_sequence(2**level - 1)
    if indices != expected:
        logger.warning(f"level {level}: gap indices {indices[:16]}… differ from ruler prefix")
        return False
    return True
