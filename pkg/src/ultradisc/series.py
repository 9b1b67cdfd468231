"""Truncated power series ``c_1 x + ... + c_N x^N`` over a ufield.

Every series fixes the origin (no constant term). The truncation order is
explicit and binary operations return the smaller order of their inputs;
nothing beyond it is ever invented. Two optional pieces of information
describe what lies past order N:

* ``polynomial=True`` -- all coefficients beyond N are exactly zero;
* ``tail_model``      -- a :class:`CoeffBoundModel` lower-bounding their
                         valuations, enough for rigorous evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from . import exactlog
from .errors import (
    FieldMismatch,
    NoTailModel,
    NonUnitLinearCoefficient,
    NotAPolynomial,
    OutsideConvergenceDisc,
    PrecisionExhausted,
)
from .ufield import FieldDesc, Scalar, parse_scalar, format_scalar


@dataclass(frozen=True)
class CoeffBoundModel:
    """Lower bound ``v(c_k) >= c0 + c1*(k-1) - c2*log2(k)`` for every k > N."""

    c1: Fraction
    c2: Fraction = Fraction(0)
    c0: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("c0", "c1", "c2"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.c2 < 0:
            raise ValueError("c2 must be nonnegative")

    def bound(self, k: int) -> int:
        """Integer lower bound on ``v(c_k)`` (valuations are integers)."""
        return exactlog.phi_ceil(self.c0, self.c1, self.c2, k)

    def converges_at(self, v) -> bool:
        """Whether the bound forces ``c_k x^k -> 0`` for ``v(x) = v``."""
        return v == math.inf or self.c1 + v > 0


@dataclass(frozen=True)
class TruncatedSeries:
    field: FieldDesc
    coeffs: tuple[Scalar, ...]
    tail_model: CoeffBoundModel | None = None
    polynomial: bool = False

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if not coeffs:
            raise ValueError("a truncated series needs order >= 1")
        for c in coeffs:
            if c.field != self.field:
                raise FieldMismatch(f"coefficient in {c.field}, series over {self.field}")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Scalar:
        """Coefficient of x^k (1-based)."""
        if k < 1:
            raise IndexError("series coefficients start at degree 1")
        if k > self.order:
            if self.polynomial:
                return self.field.zero()
            raise IndexError(f"degree {k} beyond truncation order {self.order}")
        return self.coeffs[k - 1]

    def degree(self) -> int:
        """Largest k <= N with c_k not exactly zero (0 for the zero series)."""
        for k in range(self.order, 0, -1):
            if not self.coeffs[k - 1].is_exact_zero:
                return k
        return 0

    @classmethod
    def identity(cls, field: FieldDesc, order: int) -> "TruncatedSeries":
        coeffs = [field.one()] + [field.zero()] * (order - 1)
        return cls(field, coeffs, polynomial=True)

    @classmethod
    def from_literals(cls, field: FieldDesc, literals: Sequence[str], polynomial: bool = False):
        return cls(field, [parse_scalar(field, s) for s in literals], polynomial=polynomial)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            return self
        dropped = any(not c.is_exact_zero for c in self.coeffs[order:])
        return TruncatedSeries(
            self.field,
            self.coeffs[:order],
            tail_model=None if dropped else self.tail_model,
            polynomial=self.polynomial and not dropped,
        )

    def is_zero(self) -> bool:
        """All known coefficients vanish (exactly or to precision)."""
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other):
        return ps_add(self, other)

    def __sub__(self, other):
        return ps_add(self, -other)

    def __neg__(self):
        return TruncatedSeries(self.field, [-c for c in self.coeffs], self.tail_model, self.polynomial)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return ps_mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        return ps_compose(self, inner)

    def __str__(self) -> str:
        terms = [f"({c})*x^{k}" for k, c in enumerate(self.coeffs, 1) if not c.is_exact_zero]
        body = " + ".join(terms) or "0"
        return body if self.polynomial else f"{body} + O(x^{self.order + 1})"


def _check(a: TruncatedSeries, b: TruncatedSeries):
    if a.field != b.field:
        raise FieldMismatch(f"cannot combine series over {a.field} and {b.field}")


def scale(a: TruncatedSeries, c) -> TruncatedSeries:
    """Multiply every coefficient by the scalar ``c``."""
    return TruncatedSeries(a.field, [x * c for x in a.coeffs], polynomial=a.polynomial)


def ps_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check(a, b)
    n = min(a.order, b.order)
    coeffs = [a.coeffs[i] + b.coeffs[i] for i in range(n)]
    poly = (
        a.polynomial
        and b.polynomial
        and all(c.is_exact_zero for c in a.coeffs[n:] + b.coeffs[n:])
    )
    return TruncatedSeries(a.field, coeffs, polynomial=poly)


def ps_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to ``min(order_a, order_b)``."""
    _check(a, b)
    n = min(a.order, b.order)
    zero = a.field.zero()
    out = [zero] * n
    # product of two series with no constant term starts at x^2
    for i in range(1, n):
        ai = a.coeffs[i - 1]
        if ai.is_exact_zero:
            continue
        for j in range(1, n - i + 1):
            bj = b.coeffs[j - 1]
            if not bj.is_exact_zero:
                out[i + j - 1] = out[i + j - 1] + ai * bj
    poly = a.polynomial and b.polynomial and a.degree() + b.degree() <= n
    return TruncatedSeries(a.field, out, polynomial=poly)


def power_table(h: TruncatedSeries, n: int | None = None) -> list[list[Scalar]]:
    """``P[l][j] = [x^j] h^l`` for ``1 <= l, j <= n`` (index 0 unused).

    Built incrementally, ``h^(l+1) = h^l * h``, truncating every power at n.
    """
    n = h.order if n is None else n
    if n > h.order:
        raise ValueError("power table order exceeds the series order")
    zero = h.field.zero()
    c = [zero] + list(h.coeffs[:n])
    nz = [i for i in range(1, n + 1) if not c[i].is_exact_zero]
    table = [[zero] * (n + 1), list(c)]
    for l in range(2, n + 1):
        prev = table[l - 1]
        row = [zero] * (n + 1)
        for j in range(l, n + 1):
            acc = zero
            for i in nz:
                if i > j - l + 1:
                    break
                q = prev[j - i]
                if not q.is_exact_zero:
                    acc = acc + c[i] * q
            row[j] = acc
        table.append(row)
    return table


def ps_compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """``outer(inner(x))`` through ``min(order_outer, order_inner)``."""
    _check(outer, inner)
    n = min(outer.order, inner.order)
    table = power_table(inner, n)
    zero = outer.field.zero()
    out = []
    for k in range(1, n + 1):
        acc = zero
        for l in range(1, k + 1):
            o = outer.coeffs[l - 1]
            if not o.is_exact_zero:
                t = table[l][k]
                if not t.is_exact_zero:
                    acc = acc + o * t
        out.append(acc)
    poly = outer.polynomial and inner.polynomial and outer.degree() * inner.degree() <= n
    return TruncatedSeries(outer.field, out, polynomial=poly)


def ps_comp_inverse(h: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse through the truncation order (triangular solve).

    With ``d = h^{-1}``: ``d_1 = 1/c_1`` and, for k >= 2,
    ``d_k = -(sum_{l=2..k} c_l [x^k] d^l) / c_1`` where ``[x^k] d^l`` only
    involves ``d_1 .. d_{k-1}``.
    """
    return comp_inverse_with_powers(h)[0]


def comp_inverse_with_powers(h: TruncatedSeries):
    """The inverse together with its power table (same layout as :func:`power_table`)."""
    c1 = h.coeffs[0]
    if c1.is_exact_zero:
        raise NonUnitLinearCoefficient("linear coefficient is zero")
    if c1.is_zero_to_precision:
        raise PrecisionExhausted("linear coefficient is zero to the tracked precision")
    n = h.order
    zero = h.field.zero()
    inv_c1 = c1.inverse()
    d = [zero, inv_c1]
    # powers[l][j] = [x^j] d^l, filled column by column
    powers = [[zero] * (n + 1) for _ in range(n + 1)]
    powers[1][1] = inv_c1
    for k in range(2, n + 1):
        acc = zero
        for l in range(2, k + 1):
            s = zero
            prev = powers[l - 1]
            for i in range(1, k - l + 2):
                di = d[i]
                if di.is_exact_zero:
                    continue
                q = prev[k - i]
                if not q.is_exact_zero:
                    s = s + di * q
            powers[l][k] = s
            cl = h.coeffs[l - 1]
            if not cl.is_exact_zero and not s.is_exact_zero:
                acc = acc + cl * s
        dk = -(acc * inv_c1)
        d.append(dk)
        powers[1][k] = dk
    inv = TruncatedSeries(h.field, d[1:], polynomial=h.polynomial and h.degree() == 1)
    return inv, powers


def _tail_floor(model: CoeffBoundModel, order: int, v) -> int:
    """Integer lower bound on ``v(sum_{k>N} c_k x^k)`` when ``v(x) = v``."""
    a0 = model.c0 + v
    a1 = model.c1 + v
    return min(exactlog.phi_ceil(a0, a1, model.c2, k) for k in exactlog.tail_scan(order + 1, a1, model.c2))


def ps_eval(h: TruncatedSeries, x: Scalar, rigorous: bool = False):
    """Evaluate at ``x``: returns ``(value, tail_valuation_bound)``.

    ``value`` is the Horner evaluation of the known coefficients. The tail
    bound is ``math.inf`` for polynomials, an integer lower bound on the
    valuation of the neglected tail when a model is present, and ``None``
    (unknown) otherwise -- unless ``rigorous`` is set, which turns the missing
    model into :class:`NoTailModel`.
    """
    if x.field != h.field:
        raise FieldMismatch(f"point in {x.field}, series over {h.field}")
    if x.is_exact_zero:
        return h.field.zero(), math.inf
    v = x.valuation()
    if h.polynomial:
        tail = math.inf
    elif h.tail_model is not None:
        if not h.tail_model.converges_at(v):
            raise OutsideConvergenceDisc(f"v(x) = {v} is outside the disc guaranteed by the tail model")
        tail = _tail_floor(h.tail_model, h.order, v)
    elif rigorous:
        raise NoTailModel("series has no tail model; cannot bound the truncation error")
    else:
        tail = None
    acc = h.coeffs[-1]
    for c in reversed(h.coeffs[:-1]):
        acc = acc * x + c
    return acc * x, tail


def variation_floor(h: TruncatedSeries, y: Scalar, eps_valuation) -> int | float:
    """Lower bound on ``v(h(y + e) - h(y))`` for any ``e`` with ``v(e) >= eps_valuation``.

    Uses ``(y+e)^k - y^k = sum_j C(k,j) y^(k-j) e^j`` so each term has
    valuation at least ``v(e) + (k-1)*min(v(y), v(e))``.
    """
    if eps_valuation == math.inf:
        return math.inf
    w = min(y.valuation(), eps_valuation)
    best = math.inf
    for k, c in enumerate(h.coeffs, 1):
        if not c.is_exact_zero:
            best = min(best, c.valuation() + (k - 1) * w)
    if not h.polynomial:
        m = h.tail_model
        if m is None:
            raise NoTailModel("series has no tail model; cannot propagate input error")
        a1 = m.c1 + w
        if a1 <= 0:
            raise OutsideConvergenceDisc("perturbation leaves the disc guaranteed by the tail model")
        tail = min(
            exactlog.phi_ceil(m.c0 + w, a1, m.c2, k) for k in exactlog.tail_scan(h.order + 1, a1, m.c2)
        )
        best = min(best, tail)
    return eps_valuation + best


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of ``(i, v(c_i))``; root valuations are negated slopes."""

    vertices: tuple[tuple[int, Fraction], ...]
    segments: tuple[tuple[Fraction, int], ...] = dc_field(default=())

    def root_valuations(self) -> list[tuple[Fraction, int]]:
        """``(valuation, multiplicity)`` for the nonzero roots, by increasing valuation."""
        return sorted(((-s, n) for s, n in self.segments), key=lambda t: t[0])


def newton_polygon(h: TruncatedSeries) -> NewtonPolygon:
    if not h.polynomial:
        raise NotAPolynomial("Newton polygon needs a series with exactly zero tail")
    pts = []
    for k, c in enumerate(h.coeffs, 1):
        if c.is_exact_zero:
            continue
        if c.is_zero_to_precision:
            raise PrecisionExhausted(f"coefficient of x^{k} is only known to be O(pi^{c.valuation()})")
        pts.append((k, Fraction(c.valuation())))
    hull: list[tuple[int, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it lies strictly below the chord to pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = tuple(
        (Fraction(y2 - y1) / (x2 - x1), x2 - x1) for (x1, y1), (x2, y2) in zip(hull, hull[1:])
    )
    return NewtonPolygon(tuple(hull), segments)


def series_to_json(h: TruncatedSeries) -> dict:
    return {"coefficients": [format_scalar(c) for c in h.coeffs], "polynomial": h.polynomial}


def series_from_json(field: FieldDesc, obj) -> TruncatedSeries:
    """Accepts ``{"coefficients": [...], "polynomial": bool}`` or a bare list."""
    if isinstance(obj, list):
        return TruncatedSeries.from_literals(field, obj)
    return TruncatedSeries.from_literals(field, obj["coefficients"], bool(obj.get("polynomial", False)))
