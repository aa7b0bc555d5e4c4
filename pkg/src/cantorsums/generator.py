"""
B = {⌊pⁿα⌋} built by the integer recursion x_{k+1} = p·xₖ + η_{k+1},
with partial sums sₖ and Δₖ = xₖ − (p−1)·s_{k−1} (s₋₁ = 0).
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Set

import numpy as np

from cantorsums.digit_stream import DigitStream, RationalAlpha, check_radix
from cantorsums.exceptions import InvalidParameter
from cantorsums.log import logger
from cantorsums.schemas import LemmaCheck


@dataclass(frozen=True)
class GeneratorTable:
    stream: DigitStream
    n: int
    digits: np.ndarray
    deltas: np.ndarray
    terms: Optional[List[int]] = field(default=None, repr=False)
    partial_sums: Optional[List[int]] = field(default=None, repr=False)

    @property
    def p(self) -> int:
        return self.stream.p

    @property
    def materialized(self) -> bool:
        return self.terms is not None

    def _require_terms(self):
        if not self.materialized:
            raise InvalidParameter(
                "generator table was built in deltas-only mode; rebuild with materialize=True",
                flag="--materialize",
            )

    def s(self, k: int) -> int:
        """s_k with the s₋₁ = 0 convention."""
        self._require_terms()
        if k < 0:
            return 0
        return self.partial_sums[k]

    def subset_sum(self, indices: Iterable[int]) -> int:
        self._require_terms()
        total = 0
        for i in indices:
            if not 0 <= i <= self.n:
                raise InvalidParameter(f"index {i} outside [0, {self.n}]")
            total += self.terms[i]
        return total

    def terms_up_to(self, bound: int) -> List[int]:
        """Terms ≤ bound (the only ones that matter for FS ∩ [0, bound])."""
        self._require_terms()
        return [x for x in self.terms if x <= bound]

    def to_report(self) -> dict:
        report = {**self.stream.describe(), "n": self.n}
        if self.materialized:
            report["x"] = [str(x) for x in self.terms]
            report["s"] = [str(s) for s in self.partial_sums]
        report["delta"] = self.deltas.tolist()
        return report


def build_table(digits: DigitStream, n: int, materialize: bool = True) -> GeneratorTable:
    if n < 0:
        raise InvalidParameter(f"depth n must be >= 0, got {n}", flag="--n")
    p = digits.p
    eta = digits.digits_array(n)
    # Δ_{k} = Δ_{k-1} + η_k
    deltas = np.cumsum(eta)
    deltas.setflags(write=False)
    if not materialize:
        logger.debug(f"built deltas-only table for {digits!r}, n={n}")
        return GeneratorTable(stream=digits, n=n, digits=eta, deltas=deltas)

    terms: List[int] = []
    partial_sums: List[int] = []
    x = 0
    s = 0
    for digit in eta.tolist():
        x = p * x + digit
        s += x
        terms.append(x)
        partial_sums.append(s)
    logger.debug(f"built table for {digits!r}, n={n}, x_n has {terms[-1].bit_length()} bits")
    return GeneratorTable(
        stream=digits,
        n=n,
        digits=eta,
        deltas=deltas,
        terms=terms,
        partial_sums=partial_sums,
    )


# 仅保存 Δ 的表只能在这一段前缀上用真实的 xₖ 复核
LEMMA_WINDOW = 2000


def _recomputed_deltas(table: GeneratorTable) -> List[int]:
    p = table.p
    return [x - (p - 1) * table.s(k - 1) for k, x in enumerate(table.terms)]


def verify_lemma_2_2(table: GeneratorTable) -> LemmaCheck:
    """Δₖ equals the k-th digit prefix sum for every k ≤ n.

    Δ is recomputed from xₖ − (p−1)s_{k−1} rather than taken from the
    recursion, so the check is not circular. A deltas-only table has no xₖ;
    its first LEMMA_WINDOW + 1 entries are checked against a materialized
    rebuild and ``checked_up_to`` says how far the check reached.
    """
    if table.materialized:
        window = table
    else:
        window = build_table(table.stream, min(table.n, LEMMA_WINDOW))
    prefix = np.cumsum(window.digits).tolist()
    deltas = _recomputed_deltas(window)
    stored = table.deltas[: window.n + 1].tolist()
    for k, (delta, expected, kept) in enumerate(zip(deltas, prefix, stored)):
        if delta != expected or kept != expected:
            logger.error(f"Δ_{k} = {delta} (stored {kept}) but digit prefix sum is {expected}")
            return LemmaCheck(passed=False, first_failure=k, deltas=deltas[: k + 1], checked_up_to=k)
    if not table.materialized:
        logger.debug(f"deltas-only table: Δ checked against xₖ up to k = {window.n} of {table.n}")
        deltas = table.deltas.tolist()
    return LemmaCheck(passed=True, deltas=deltas, checked_up_to=window.n)


def floor_power_oracle(alpha: RationalAlpha, p: int, n: int) -> int:
    """⌊pⁿ·num/den⌋ straight from big-integer division."""
    check_radix(p)
    if n < 0:
        raise InvalidParameter(f"index n must be >= 0, got {n}", flag="--n")
    return (p**n * alpha.num) // alpha.den


def complement_in_prefix(subset: Iterable[int], n: int) -> Set[int]:
    subset = set(subset)
    for i in subset:
        if not 0 <= i <= n:
            raise InvalidParameter(f"index {i} outside [0, {n}]")
    return set(range(n + 1)) - subset
