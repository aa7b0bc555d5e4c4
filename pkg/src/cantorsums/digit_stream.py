"""
Base-p digits η₀, η₁, … of α ∈ (1, 2), α = Σ ηᵢ p^{-i}.

Rational α is expanded by exact long division (terminating expansions are
kept as they are); the "almost all α" regime is modelled by i.i.d. uniform
digits drawn from numpy's PCG64 generator.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence

import numpy as np

from cantorsums.exceptions import InvalidParameter
from cantorsums.log import logger
from cantorsums.utils import SEED_LIMIT, seeded_rng


def check_radix(p: int) -> int:
    if not isinstance(p, int) or p < 2:
        raise InvalidParameter(f"radix p must be an integer >= 2, got {p!r}", flag="--p")
    return p


@dataclass(frozen=True)
class RationalAlpha:
    num: int
    den: int

    def __post_init__(self):
        if self.den <= 0 or self.num <= 0:
            raise InvalidParameter(
                f"alpha {self.num}/{self.den} must have positive numerator and denominator",
                flag="--alpha",
            )
        if not self.den < self.num < 2 * self.den:
            raise InvalidParameter(
                f"alpha {self.num}/{self.den} is not in the open interval (1, 2)",
                flag="--alpha",
            )
        if gcd(self.num, self.den) != 1:
            raise InvalidParameter(
                f"alpha {self.num}/{self.den} is not in lowest terms", flag="--alpha"
            )

    @classmethod
    def parse(cls, text: str) -> "RationalAlpha":
        """Parse "num/den" (reduced on the way in)."""
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidParameter(f"cannot parse alpha {text!r}: {e}", flag="--alpha")
        return cls(value.numerator, value.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def expand_rational(alpha: RationalAlpha, p: int, n: int) -> List[int]:
    """η₀…ηₙ of alpha in base p by long division of the fractional part."""
    check_radix(p)
    if n < 0:
        raise InvalidParameter(f"digit count n must be >= 0, got {n}", flag="--n")
    digits = [1]
    remainder = alpha.num - alpha.den
    for _ in range(n):
        remainder *= p
        digit, remainder = divmod(remainder, alpha.den)
        digits.append(digit)
    return digits


def random_stream(seed: int, p: int, n: int) -> List[int]:
    return random_digits_array(seed, p, n).tolist()


def random_digits_array(seed: int, p: int, n: int) -> np.ndarray:
    check_radix(p)
    if n < 0:
        raise InvalidParameter(f"digit count n must be >= 0, got {n}", flag="--n")
    rng = seeded_rng(seed)
    digits = np.empty(n + 1, dtype=np.int64)
    digits[0] = 1
    if n:
        digits[1:] = rng.integers(0, p, size=n, dtype=np.int64)
    return digits


def digit_prefix_sums(digits: Sequence[int]) -> List[int]:
    """Σ_{i≤k} ηᵢ for every k (right-hand side of Δₖ = Σ ηᵢ)."""
    return np.cumsum(np.asarray(digits, dtype=np.int64)).tolist()


def digits_value(digits: Sequence[int], p: int) -> Fraction:
    """Exact Σ ηᵢ p^{-i} of a digit prefix."""
    numerator = 0
    for digit in digits:
        numerator = numerator * p + int(digit)
    return Fraction(numerator, p ** (len(digits) - 1))


class DigitStream:
    """Digits of α in base p from a rational or a seeded-random source.

    Both sources are pure functions of their parameters; digits are cached
    so repeated prefix requests do not redo the division / draw.
    """

    __slots__ = ("p", "alpha", "seed", "_cache")

    def __init__(
        self,
        p: int,
        alpha: Optional[RationalAlpha] = None,
        seed: Optional[int] = None,
    ):
        check_radix(p)
        if (alpha is None) == (seed is None):
            raise InvalidParameter("a digit stream needs exactly one of alpha / seed")
        if seed is not None and not 0 <= seed < SEED_LIMIT:
            raise InvalidParameter(f"seed must be a 64-bit unsigned integer, got {seed}", flag="--seed")
        self.p = p
        self.alpha = alpha
        self.seed = seed
        self._cache: np.ndarray = np.ones(1, dtype=np.int64)

    @classmethod
    def rational(cls, alpha: RationalAlpha | str, p: int) -> "DigitStream":
        if isinstance(alpha, str):
            alpha = RationalAlpha.parse(alpha)
        return cls(p, alpha=alpha)

    @classmethod
    def seeded(cls, seed: int, p: int) -> "DigitStream":
        return cls(p, seed=seed)

    @property
    def is_random(self) -> bool:
        return self.seed is not None

    def describe(self) -> dict:
        if self.is_random:
            return {"p": self.p, "seed": self.seed}
        return {"p": self.p, "alpha": str(self.alpha)}

    def digits_array(self, n: int) -> np.ndarray:
        """η₀…ηₙ as an int64 array (read-only view)."""
        if n < 0:
            raise InvalidParameter(f"digit count n must be >= 0, got {n}", flag="--n")
        if len(self._cache) <= n:
            if self.is_random:
                self._cache = random_digits_array(self.seed, self.p, n)
            else:
                self._cache = np.asarray(
                    expand_rational(self.alpha, self.p, n), dtype=np.int64
                )
            self._cache.setflags(write=False)
            logger.debug(f"digit stream {self.describe()} expanded to n={n}")
        return self._cache[: n + 1]

    def digits(self, n: int) -> List[int]:
        return self.digits_array(n).tolist()

    def approx_alpha(self, precision: int = 64) -> Fraction:
        """α truncated to ``precision`` digits (exact for the prefix)."""
        if not self.is_random:
            return self.alpha.value
        return digits_value(self.digits(precision), self.p)

    def __repr__(self) -> str:
        source = f"seed={self.seed}" if self.is_random else f"alpha={self.alpha}"
        return f"DigitStream(p={self.p}, {source})"
