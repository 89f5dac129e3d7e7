"""
Exact fixed-point distribution of a uniform random permutation.
"""
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import List


@lru_cache(maxsize=None)
def alternating_partial_sum(m: int) -> Fraction:
    """
    sum_{j=0}^{m} (-1)^j / j!, which never exceeds 1.

    Examples:
        >>> alternating_partial_sum(2)
        Fraction(1, 2)
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    total = sum((Fraction((-1) ** j, factorial(j)) for j in range(m + 1)), Fraction(0))
    assert total <= 1, "alternating partial sum exceeded 1"
    return total


def fixed_point_pmf(n: int, k: int) -> Fraction:
    """
    P[a uniform permutation of [n] has exactly k fixed points].

    Examples:
        >>> fixed_point_pmf(4, 0)
        Fraction(3, 8)
        >>> fixed_point_pmf(3, 2)
        Fraction(0, 1)
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in 0..{n}, got {k}")
    return alternating_partial_sum(n - k) / factorial(k)


def fixed_point_distribution(n: int) -> List[Fraction]:
    """[P[X = 0], ..., P[X = n]]; sums to exactly 1."""
    return [fixed_point_pmf(n, k) for k in range(n + 1)]
