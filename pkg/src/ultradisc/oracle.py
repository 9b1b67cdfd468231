"""Brute-force cross-checks that share as little code as possible with the solver.

* the b_k recursion through explicit enumeration of the index equations
  ``sum alpha_i = l``, ``sum i*alpha_i = k`` with multinomial weights,
* the bound ``l <= k/2`` on solutions with ``alpha_1 = 0``,
* preimage censuses of ``h`` on ``F_p[T]/(T^m)``,
* pointwise evaluation of the conjugacy identities with error floors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Iterable, Sequence

from .errors import (
    IndifferentMultiplier,
    NonIntegralCoefficients,
    OutsideConvergenceDisc,
    PrecisionExhausted,
    TooLarge,
)
from .series import TruncatedSeries, ps_eval, variation_floor
from .ufield import FieldKind, Scalar

MAX_ENUM_K = 24
MAX_RECURSION_K = 12
MAX_SCAN_K = 8
MAX_CENSUS = 10**6


@dataclass(frozen=True, order=True)
class IndexSolution:
    """``alpha[i-1] = alpha_i``; satisfies ``sum alpha = l`` and ``sum i*alpha_i = k``."""

    l: int
    alpha: tuple[int, ...]
    k: int = dc_field(compare=False)

    def multinomial(self) -> int:
        out = math.factorial(self.l)
        for a in self.alpha:
            out //= math.factorial(a)
        return out


def _partitions(k: int, largest: int):
    """Partitions of k into parts <= largest, as lists in decreasing order."""
    if k == 0:
        yield []
        return
    for part in range(min(k, largest), 0, -1):
        for rest in _partitions(k - part, part):
            yield [part] + rest


def enumerate_index_solutions(k: int) -> list[IndexSolution]:
    """All solutions with ``1 <= l <= k-1``, ordered by ``(l, alpha)``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > MAX_ENUM_K:
        raise TooLarge(f"k = {k} exceeds the enumeration guard {MAX_ENUM_K}")
    out = []
    for parts in _partitions(k, k):
        if len(parts) == k:  # all ones: the lambda^k term
            continue
        alpha = [0] * k
        for part in parts:
            alpha[part - 1] += 1
        out.append(IndexSolution(len(parts), tuple(alpha), k))
    out.sort()
    return out


def scan_index_solutions(k: int) -> list[IndexSolution]:
    """Same set as :func:`enumerate_index_solutions`, by scanning bounded vectors."""
    if k > MAX_SCAN_K:
        raise TooLarge(f"vector scan limited to k <= {MAX_SCAN_K}")
    ranges = [range(k // i + 1) for i in range(1, k + 1)]
    out = []
    for alpha in itertools.product(*ranges):
        l = sum(alpha)
        if 1 <= l <= k - 1 and sum(i * a for i, a in enumerate(alpha, 1)) == k:
            out.append(IndexSolution(l, tuple(alpha), k))
    out.sort()
    return out


def direct_bk_recursion(m, kmax: int) -> list[Scalar]:
    """b_1..b_kmax from ``b_k(lam - lam^k) = sum_l b_l sum_alpha (l!/prod alpha_i!) prod a_i^alpha_i``."""
    if kmax > MAX_RECURSION_K:
        raise TooLarge(f"kmax = {kmax} exceeds the recursion guard {MAX_RECURSION_K}")
    if m.lam.valuation() == 0:
        raise IndifferentMultiplier("|lambda| = 1")
    F = m.field
    a = [None] + [m.coefficient(i) for i in range(1, kmax + 1)]
    b = [None, F.one()]
    for k in range(2, kmax + 1):
        acc = F.zero()
        for sol in enumerate_index_solutions(k):
            term = F.from_int(sol.multinomial())
            for i, e in enumerate(sol.alpha, 1):
                if e:
                    term = term * a[i] ** e
            acc = acc + b[sol.l] * term
        b.append(acc / (m.lam - m.lam**k))
    return b[1:]


def solver_matches(oracle_b: Sequence[Scalar], solver_b: Sequence[Scalar]) -> bool:
    """Exact equality where both are exact, agreement to precision otherwise."""
    if len(oracle_b) > len(solver_b):
        return False
    for x, y in zip(oracle_b, solver_b):
        if x.is_exact and y.is_exact:
            if x != y:
                return False
        elif not (x - y).is_zero():
            return False
    return True


@dataclass(frozen=True)
class PartitionLemmaResult:
    k: int
    max_l_with_alpha1_zero: int | None
    bound_holds: bool
    power_witness: bool


def verify_partition_lemma(k: int) -> PartitionLemmaResult:
    """Largest l with an ``alpha_1 = 0`` solution is at most k/2; for k = 2^(n+1)
    the solution ``alpha_2 = 2^n`` realizes it."""
    sols = [s for s in enumerate_index_solutions(k) if s.alpha[0] == 0]
    max_l = max((s.l for s in sols), default=None)
    holds = max_l is None or 2 * max_l <= k
    witness = False
    if k >= 4 and k & (k - 1) == 0:
        want = tuple(k // 2 if i == 2 else 0 for i in range(1, k + 1))
        witness = any(s.l == k // 2 and s.alpha == want for s in sols)
    return PartitionLemmaResult(k, max_l, holds, witness)


# -- census ---------------------------------------------------------------------


@dataclass
class CensusReport:
    """Distinct-preimage counts of h on ``F_p[T]/(T^m)``.

    Images are encoded as integers ``sum d_i p^i`` from their T-adic digits.
    ``ramified`` lists images with a preimage where ``h'`` vanishes mod T;
    there distinct points undercount preimages with multiplicity.
    """

    p: int
    modulus_depth: int
    min_valuation: int
    domain_size: int
    histogram: dict[int, int]
    ramified: list[int]

    @property
    def max_count(self) -> int:
        return max(self.histogram.values(), default=0)

    def label(self, code: int) -> str:
        terms = []
        for i in range(self.modulus_depth):
            d = code % self.p
            code //= self.p
            if d:
                mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
                coef = str(d) if (d != 1 or i == 0) else ""
                terms.append(coef + ("*" if coef and mono else "") + mono)
        return " + ".join(terms) if terms else "0"

    def labelled_histogram(self) -> dict[str, int]:
        return {self.label(c): n for c, n in sorted(self.histogram.items())}


def _digits(c: Scalar, m: int) -> list[int]:
    if c.is_exact_zero:
        return [0] * m
    if c.valuation() < 0:
        raise NonIntegralCoefficients("census needs coefficients with v >= 0")
    if c.absolute_precision < m:
        raise PrecisionExhausted(f"coefficient known only to O(T^{c.absolute_precision})")
    return [int(c.coefficient(e)) % c.field.p for e in range(m)]


def _mul_trunc(x: list[int], y: list[int], m: int, p: int) -> list[int]:
    out = [0] * m
    for i, xi in enumerate(x):
        if xi:
            for j in range(m - i):
                out[i + j] = (out[i + j] + xi * y[j]) % p
    return out


def _eval_trunc(coeffs: list[list[int]], x: list[int], m: int, p: int) -> list[int]:
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = _mul_trunc(acc, x, m, p)
        acc = [(u + w) % p for u, w in zip(acc, c)]
    return _mul_trunc(acc, x, m, p)


def preimage_census(h: TruncatedSeries, m: int, min_valuation: int = 0) -> CensusReport:
    """Evaluate h at every point of ``T^min_valuation * F_p[T]/(T^m)``."""
    F = h.field
    if F.kind is not FieldKind.LAURENT_FP:
        raise ValueError("census needs a series over F_p((T))")
    if not h.polynomial:
        raise NonIntegralCoefficients("census needs a polynomial")
    p = F.p
    free = max(m - min_valuation, 0)
    if p**free > MAX_CENSUS:
        raise TooLarge(f"{p}^{free} points exceed the census guard")
    coeffs = [_digits(c, m) for c in h.coeffs]
    # h'(x) mod T only needs constant digits
    deriv0 = [(k * c[0]) % p for k, c in enumerate(coeffs, 1)]
    hist: dict[int, int] = {}
    ramified: set[int] = set()
    for tail in itertools.product(range(p), repeat=free):
        x = [0] * (m - free) + list(tail)
        y = _eval_trunc(coeffs, x, m, p)
        code = sum(d * p**i for i, d in enumerate(y))
        hist[code] = hist.get(code, 0) + 1
        dx = sum(d * pow(x[0], k - 1, p) for k, d in enumerate(deriv0, 1)) % p
        if dx == 0:
            ramified.add(code)
    return CensusReport(p, m, min_valuation, p**free, dict(sorted(hist.items())), sorted(ramified))


# -- pointwise -------------------------------------------------------------------


class PointMode(str, Enum):
    SEMI = "semi"
    FULL = "full"


@dataclass(frozen=True)
class PointResult:
    """Residual ``v(lhs - rhs)`` against the floor implied by truncation and precision.

    ``residual`` is None when the point lies outside the disc where the
    identity is proved.
    """

    point: Scalar
    mode: PointMode
    in_domain: bool
    residual: int | float | None = None
    floor: int | float | None = None
    zero_to_precision: bool = False

    @property
    def passed(self) -> bool | None:
        if not self.in_domain:
            return None
        return self.zero_to_precision or self.residual >= self.floor


def _eval_chain(h: TruncatedSeries, value: Scalar, err) -> tuple[Scalar, int | float]:
    """h at a point known as ``value`` up to an error of valuation ``>= err``."""
    out, floor = ps_eval(h, value, rigorous=True)
    if err != math.inf:
        floor = min(floor, variation_floor(h, value, err))
    return out, floor


def _precision_floor(x: Scalar):
    return math.inf if x.is_exact else x.absolute_precision


def pointwise_conjugacy_check(
    f: TruncatedSeries,
    g: TruncatedSeries,
    g_inv: TruncatedSeries | None,
    points: Iterable[Scalar],
    mode: PointMode,
    domain_exponent,
    lam: Scalar,
) -> list[PointResult]:
    """Evaluate ``g(f(x)) - lam*g(x)`` (semi) or ``g(f(g^-1(x))) - lam*x`` (full).

    ``domain_exponent`` is the exponent of the disc on which the identity is
    proved; points with ``v(x) <= -domain_exponent`` are reported out of domain.
    """
    mode = PointMode(mode)
    out = []
    for x in points:
        if x.is_exact_zero:
            out.append(PointResult(x, mode, True, math.inf, math.inf))
            continue
        if domain_exponent is None or not x.valuation() > -domain_exponent:
            out.append(PointResult(x, mode, False))
            continue
        try:
            if mode is PointMode.SEMI:
                y, e1 = _eval_chain(f, x, math.inf)
                lhs, e2 = _eval_chain(g, y, e1)
                gx, e3 = _eval_chain(g, x, math.inf)
                rhs = lam * gx
                floor = min(e2, e3 + lam.valuation())
            else:
                u, e1 = _eval_chain(g_inv, x, math.inf)
                y, e2 = _eval_chain(f, u, e1)
                lhs, floor = _eval_chain(g, y, e2)
                rhs = lam * x
        except OutsideConvergenceDisc:
            out.append(PointResult(x, mode, False))
            continue
        diff = lhs - rhs
        floor = min(floor, _precision_floor(lhs), _precision_floor(rhs))
        if diff.is_zero():
            out.append(PointResult(x, mode, True, diff.valuation(), floor, not diff.is_exact_zero))
        else:
            out.append(PointResult(x, mode, True, diff.valuation(), floor))
    return out


def check_points(report, points: Iterable[Scalar], mode) -> list[PointResult]:
    """Pointwise check against a solver report's proved discs."""
    mode = PointMode(mode)
    dom = report.semi_domain if mode is PointMode.SEMI else report.full_domain
    g_inv = report.g_inverse if mode is PointMode.FULL else None
    e = None if dom is None else dom.exponent
    return pointwise_conjugacy_check(report.f, report.g, g_inv, points, mode, e, report.map.lam)
