"""Exact decisions involving base-2 logarithms of positive integers.

All comparisons reduce ``log2(k) >= n/d`` to ``k**d >= 2**n`` so nothing
here ever touches floating point except as a starting guess that is then
corrected exactly.

The tail-scan helpers work with sequences of the shape

    phi(k) = a0 + a1*(k - 1) - c2*log2(k),      c2 >= 0,

which covers every coefficient bound used in the package.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

from .errors import TooLarge

# Upper limit on how far a tail scan may walk before the sequence is
# provably increasing.
MAX_SCAN = 1_000_000


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def log2_at_least(k: int, r) -> bool:
    """``log2(k) >= r`` for an integer ``k >= 1`` and rational ``r``."""
    r = _frac(r)
    if r <= 0:
        return True
    return k ** r.denominator >= 2 ** r.numerator


def log2_at_most(k: int, r) -> bool:
    """``log2(k) <= r``."""
    r = _frac(r)
    if r < 0:
        return False
    if r == 0:
        return k == 1
    return k ** r.denominator <= 2 ** r.numerator


def log2_equals(k: int, r) -> bool:
    r = _frac(r)
    if r < 0:
        return False
    if r == 0:
        return k == 1
    return k ** r.denominator == 2 ** r.numerator


def ceil_minus_log2(a, c, k: int) -> int:
    """Exact ``ceil(a - c*log2(k))`` for rational ``a`` and ``c >= 0``."""
    a, c = _frac(a), _frac(c)
    if c == 0 or k == 1:
        return math.ceil(a)

    # m >= a - c*log2 k  <=>  log2 k >= (a - m)/c ; monotone in m
    def ok(m: int) -> bool:
        return log2_at_least(k, (a - m) / c)

    m = math.ceil(float(a) - float(c) * math.log2(k))
    while ok(m - 1):
        m -= 1
    while not ok(m):
        m += 1
    return m


def phi_nonnegative(a0, a1, c2, k: int) -> bool:
    """``a0 + a1*(k-1) - c2*log2(k) >= 0``."""
    lin = _frac(a0) + _frac(a1) * (k - 1)
    c2 = _frac(c2)
    if c2 == 0:
        return lin >= 0
    return log2_at_most(k, lin / c2)


def phi_zero(a0, a1, c2, k: int) -> bool:
    lin = _frac(a0) + _frac(a1) * (k - 1)
    c2 = _frac(c2)
    if c2 == 0:
        return lin == 0
    return log2_equals(k, lin / c2)


def phi_ceil(a0, a1, c2, k: int) -> int:
    return ceil_minus_log2(_frac(a0) + _frac(a1) * (k - 1), c2, k)


def increasing_after(a1, c2, k: int) -> bool:
    """True when ``phi(k+1) > phi(k)``, i.e. ``a1 > c2*log2((k+1)/k)``.

    Once true for some k it stays true for every larger k.
    """
    a1, c2 = _frac(a1), _frac(c2)
    if c2 == 0:
        return a1 > 0
    if a1 <= 0:
        return False
    r = a1 / c2
    # 2**(n/d) > (k+1)/k  <=>  2**n * k**d > (k+1)**d
    return 2 ** r.numerator * k ** r.denominator > (k + 1) ** r.denominator


def tail_scan(start: int, a1, c2) -> Iterator[int]:
    """Yield ``start, start+1, ...`` up to the first k after which phi increases.

    The minimum of phi over all ``k >= start`` is attained among the yielded
    indices. Requires ``a1 > 0`` (otherwise phi is unbounded below or flat).
    """
    if _frac(a1) <= 0:
        raise ValueError("tail scan needs a positive linear rate")
    k = start
    while True:
        yield k
        if increasing_after(a1, c2, k):
            return
        k += 1
        if k - start > MAX_SCAN:
            raise TooLarge(f"tail scan did not settle within {MAX_SCAN} terms")
