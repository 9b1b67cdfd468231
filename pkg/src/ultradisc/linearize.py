"""Linearization of ``f(x) = lam*x + a_2 x^2 + ...`` at a hyperbolic fixed point.

Radii are handled in exponent form: a radius ``r`` is stored as ``e`` with
``r = q**e``, so ``|x| < r`` reads ``v(x) > -e``. The four radii of a map are

    rho    e = inf_{i>=2} v(a_i)/(i-1)
    R_f    e = liminf v(a_i)/i
    gamma  e = inf_{i>=2} (v(a_i) - v(lam))/(i-1)
    delta  e = min(e_Rf, e_gamma)             (radius of injectivity)

and the conjugacy ``g = x + b_2 x^2 + ...`` solving ``g(f(x)) = lam*g(x)`` is
found coefficient by coefficient from

    b_k (lam - lam^k) = sum_{l<k} b_l [x^k] f(x)^l.

Coefficient bounds proved for g:

    attracting (v(lam) > 0):  v(b_k) >= (k-1)*e_rho - v(lam)*log2(k)
    repelling  (v(lam) < 0):  v(b_k) >= (k-1)*(e_gamma - v(lam))
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import exactlog
from .errors import (
    DivisionByZero,
    IndifferentMultiplier,
    InsufficientTailInformation,
    NonUnitLinearCoefficient,
    SandwichViolation,
    UndeterminedTail,
    WrongRegime,
)
from .series import CoeffBoundModel, TruncatedSeries, comp_inverse_with_powers, power_table, ps_add, scale
from .ufield import FieldDesc, Scalar

INF = math.inf

# digits the cheap grouping of the full conjugacy check must be predicted to keep
GROUPING_MIN_DIGITS = 16


class Status(str, Enum):
    ATTAINED = "attained"
    LIMIT = "limit_not_attained"
    TRUNCATION = "upper_bound_from_truncation"


class Regime(str, Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"


@dataclass(frozen=True)
class LogRadius:
    """Radius ``q**exponent``; ``exponent`` is a Fraction or +-inf."""

    exponent: Fraction | float
    status: Status

    def contains(self, x: Scalar) -> bool:
        """Open-disc membership ``|x| < q**exponent``."""
        return x.valuation() > -self.exponent

    def shifted(self, delta) -> "LogRadius":
        return LogRadius(self.exponent + delta, self.status)


# -- tails --------------------------------------------------------------------


@dataclass(frozen=True)
class PolynomialTail:
    """``a_i = 0`` beyond the explicit coefficients."""


@dataclass(frozen=True)
class AffineRuleTail:
    """``a_i = pi**(alpha*i + beta)`` for ``i >= start``; zero between the explicit part and start."""

    alpha: Fraction
    beta: Fraction
    start: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.alpha.denominator != 1 or self.beta.denominator != 1:
            raise ValueError("affine tail needs integral alpha and beta to build field elements")
        if self.start < 2:
            raise ValueError("affine tail must start at degree >= 2")


@dataclass(frozen=True)
class UnknownTail:
    """Nothing is known past the explicit coefficients."""


Tail = PolynomialTail | AffineRuleTail | UnknownTail


@dataclass(frozen=True)
class MapSpec:
    """``f(x) = lam*x + sum_{i>=2} a_i x^i`` with a_2..a_M explicit."""

    field: FieldDesc
    lam: Scalar
    coeffs: tuple[Scalar, ...] = ()
    tail: Tail = PolynomialTail()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if self.lam.field != self.field or any(c.field != self.field for c in self.coeffs):
            raise ValueError("map coefficients must live in the map's field")
        if self.lam.is_zero():
            raise ValueError("multiplier must be nonzero")
        if self.lam.valuation() == 0:
            raise IndifferentMultiplier("|lambda| = 1: the indifferent case is not handled")
        if any(c.is_zero_to_precision for c in self.coeffs):
            raise ValueError("map coefficients need exact valuations")
        if isinstance(self.tail, AffineRuleTail) and self.tail.start <= self.last_explicit:
            raise ValueError("affine tail must start after the explicit coefficients")

    @property
    def last_explicit(self) -> int:
        """M: the degree of the last explicit coefficient (1 if none)."""
        return len(self.coeffs) + 1

    @property
    def vlam(self) -> int:
        return self.lam.valuation()

    @property
    def regime(self) -> Regime:
        return Regime.ATTRACTING if self.vlam > 0 else Regime.REPELLING

    def coefficient(self, i: int) -> Scalar:
        if i == 1:
            return self.lam
        if i <= self.last_explicit:
            return self.coeffs[i - 2]
        tail = self.tail
        if isinstance(tail, PolynomialTail):
            return self.field.zero()
        if isinstance(tail, AffineRuleTail):
            if i < tail.start:
                return self.field.zero()
            return self.field.uniformizer_power(int(tail.alpha * i + tail.beta))
        raise UndeterminedTail(f"coefficient a_{i} lies in an unknown tail")

    def realize(self, order: int) -> TruncatedSeries:
        """The map as a series of the given order, with whatever is known about its tail."""
        if isinstance(self.tail, UnknownTail) and order > self.last_explicit:
            raise UndeterminedTail(
                f"order {order} exceeds the {self.last_explicit} known coefficients of an unknown tail"
            )
        coeffs = [self.coefficient(i) for i in range(1, order + 1)]
        beyond = [c for c in self.coeffs[max(order - 1, 0):] if not c.is_exact_zero]
        if isinstance(self.tail, PolynomialTail) and not beyond:
            return TruncatedSeries(self.field, coeffs, polynomial=True)
        if isinstance(self.tail, UnknownTail):
            return TruncatedSeries(self.field, coeffs)
        if isinstance(self.tail, AffineRuleTail) and not beyond:
            t = self.tail
            model = CoeffBoundModel(c1=t.alpha, c0=t.alpha + t.beta)
        else:
            model = CoeffBoundModel(c1=radius_rho(self).exponent)
        return TruncatedSeries(self.field, coeffs, tail_model=model)

    def rescaled(self, c: Scalar) -> "MapSpec":
        """Coefficients ``a_i * c**(i-1)``: the map ``x -> f(c x)/c``.

        Affine tails are only rescalable by powers of the uniformizer.
        """
        coeffs = tuple(a * c ** (i - 1) for i, a in enumerate(self.coeffs, 2))
        tail = self.tail
        if isinstance(tail, AffineRuleTail):
            e = c.valuation()
            if c != self.field.uniformizer_power(e):
                raise ValueError("affine tails rescale only by exact powers of the uniformizer")
            tail = AffineRuleTail(tail.alpha + e, tail.beta - e, tail.start)
        return MapSpec(self.field, self.lam, coeffs, tail)


# -- radii ----------------------------------------------------------------------


def _explicit_inf(m: MapSpec, shift: int, denom_offset: int) -> Fraction | float:
    best = INF
    for i, a in enumerate(m.coeffs, 2):
        if not a.is_exact_zero:
            best = min(best, Fraction(a.valuation() - shift, i - denom_offset))
    return best


def _affine_inf(alpha: Fraction, beta: Fraction, start: int):
    """inf over i >= start of (alpha*i + beta)/(i-1) = alpha + (alpha+beta)/(i-1)."""
    s = alpha + beta
    if s < 0:
        return alpha + s / (start - 1), Status.ATTAINED
    if s == 0:
        return alpha, Status.ATTAINED
    return alpha, Status.LIMIT


def _ratio_inf(m: MapSpec, shift: int) -> LogRadius:
    explicit = _explicit_inf(m, shift, 1)
    tail = m.tail
    if isinstance(tail, UnknownTail):
        return LogRadius(explicit, Status.TRUNCATION)
    if isinstance(tail, PolynomialTail):
        return LogRadius(explicit, Status.ATTAINED)
    rule, status = _affine_inf(tail.alpha, tail.beta - shift, tail.start)
    if explicit <= rule:
        return LogRadius(explicit, Status.ATTAINED)
    return LogRadius(rule, status)


def radius_rho(m: MapSpec) -> LogRadius:
    """``rho = 1/sup |a_i|^(1/(i-1))``."""
    return _ratio_inf(m, 0)


def radius_gamma(m: MapSpec) -> LogRadius:
    """``gamma = inf (|lam|/|a_i|)^(1/(i-1))``."""
    return _ratio_inf(m, m.vlam)


def radius_Rf(m: MapSpec) -> LogRadius:
    """Radius of convergence; the liminf ignores the finite explicit part."""
    tail = m.tail
    if isinstance(tail, UnknownTail):
        raise UndeterminedTail("radius of convergence needs a known tail")
    if isinstance(tail, PolynomialTail):
        return LogRadius(INF, Status.ATTAINED)
    # v(a_i)/i = alpha + beta/i
    return LogRadius(tail.alpha, Status.ATTAINED if tail.beta == 0 else Status.LIMIT)


def sandwich_holds(regime: Regime, vlam, rho, rf, delta) -> bool:
    """The injectivity sandwich on exponents.

    attracting: e_rho - v(lam) <= e_delta <= e_rho <= e_Rf
    repelling:  e_rho <= e_delta <= min(e_Rf, e_rho - v(lam))
    """
    if regime is Regime.ATTRACTING:
        return rho - vlam <= delta <= rho <= rf
    return rho <= delta <= min(rf, rho - vlam)


def radius_delta(m: MapSpec) -> LogRadius:
    """Radius of injectivity ``min(R_f, gamma)``; ties report R_f's status."""
    rf = radius_Rf(m)
    gamma = radius_gamma(m)
    delta = rf if rf.exponent <= gamma.exponent else gamma
    rho = radius_rho(m)
    if not sandwich_holds(m.regime, m.vlam, rho.exponent, rf.exponent, delta.exponent):
        raise SandwichViolation(
            f"radii violate the {m.regime.value} sandwich: rho={rho.exponent}, "
            f"Rf={rf.exponent}, delta={delta.exponent}, v(lam)={m.vlam}"
        )
    return delta


def all_radii(m: MapSpec) -> dict[str, LogRadius | None]:
    """rho, Rf, gamma, delta; the last two are None when the tail is unknown."""
    out = {"rho": radius_rho(m), "gamma": radius_gamma(m)}
    try:
        out["Rf"] = radius_Rf(m)
        out["delta"] = radius_delta(m)
    except UndeterminedTail:
        out["Rf"] = out["delta"] = None
    return out


# -- bound verdicts ---------------------------------------------------------------


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class BoundVerdict:
    """Outcome of ``v(b_k) >= linear - log2_coeff*log2(k)`` at one k."""

    k: int
    valuation: int | float
    linear: Fraction | float
    log2_coeff: Fraction
    verdict: Verdict
    tight: bool = False


def _coeffs_of(report) -> Sequence[Scalar]:
    return report.b if hasattr(report, "b") else report


def _infinite_bound_verdict(k: int, bk: Scalar, log2_coeff) -> BoundVerdict:
    if bk.is_exact_zero:
        return BoundVerdict(k, INF, INF, Fraction(log2_coeff), Verdict.PASS)
    v = Verdict.UNDECIDED if bk.is_zero_to_precision else Verdict.FAIL
    return BoundVerdict(k, bk.valuation(), INF, Fraction(log2_coeff), v)


def check_bound_attracting(report, e_rho, vlam) -> list[BoundVerdict]:
    """Decide ``v(b_k) >= (k-1)*e_rho - vlam*log2(k)`` for k = 2..N, exactly.

    With ``A = v(b_k) - (k-1)*e_rho`` the test is ``log2(k) >= -A/vlam``,
    i.e. ``k**d >= 2**n`` for ``-A/vlam = n/d``.
    """
    if vlam <= 0:
        raise WrongRegime("attracting bound needs v(lambda) > 0")
    vlam = Fraction(vlam)
    b = _coeffs_of(report)
    out = []
    for k in range(2, len(b) + 1):
        bk = b[k - 1]
        if e_rho == INF:
            out.append(_infinite_bound_verdict(k, bk, vlam))
            continue
        linear = (k - 1) * Fraction(e_rho)
        if bk.is_exact_zero:
            out.append(BoundVerdict(k, INF, linear, vlam, Verdict.PASS))
            continue
        val = bk.valuation()
        r = -(val - linear) / vlam
        ok = exactlog.log2_at_least(k, r)
        if bk.is_zero_to_precision:
            out.append(BoundVerdict(k, val, linear, vlam, Verdict.PASS if ok else Verdict.UNDECIDED))
            continue
        tight = exactlog.log2_equals(k, r)
        out.append(BoundVerdict(k, val, linear, vlam, Verdict.PASS if ok else Verdict.FAIL, tight))
    return out


def check_bound_repelling(report, e_gamma, vlam) -> list[BoundVerdict]:
    """Decide ``v(b_k) >= (k-1)*(e_gamma - vlam)`` for k = 2..N."""
    if vlam >= 0:
        raise WrongRegime("repelling bound needs v(lambda) < 0")
    b = _coeffs_of(report)
    out = []
    for k in range(2, len(b) + 1):
        bk = b[k - 1]
        if e_gamma == INF:
            out.append(_infinite_bound_verdict(k, bk, 0))
            continue
        bound = (k - 1) * (Fraction(e_gamma) - vlam)
        if bk.is_exact_zero:
            out.append(BoundVerdict(k, INF, bound, Fraction(0), Verdict.PASS))
            continue
        val = bk.valuation()
        if bk.is_zero_to_precision:
            v = Verdict.PASS if val >= bound else Verdict.UNDECIDED
            out.append(BoundVerdict(k, val, bound, Fraction(0), v))
            continue
        ok = val >= bound
        out.append(BoundVerdict(k, val, bound, Fraction(0), Verdict.PASS if ok else Verdict.FAIL, val == bound))
    return out


# -- identity checks ---------------------------------------------------------------


@dataclass(frozen=True)
class IdentityCheck:
    """Coefficientwise comparison of two series.

    ``digits[k-1]`` is how many digits below the scale of the compared
    quantities the difference is known to vanish (``inf`` when there is
    nothing nonzero to compare; ``None`` when the difference is nonzero).
    """

    difference: TruncatedSeries
    digits: tuple

    @property
    def vanishes(self) -> bool:
        return self.difference.is_zero()

    @property
    def exact(self) -> bool:
        return all(c.is_exact_zero for c in self.difference.coeffs)

    @property
    def min_digits(self):
        if not self.vanishes:
            return None
        return min(self.digits)


def _compose_scaled(outer: TruncatedSeries, inner: TruncatedSeries, table=None):
    """Composition plus, per degree, the least valuation among its summands.

    ``table`` may supply the power table of ``inner`` when it is already known.
    """
    n = min(outer.order, inner.order)
    if table is None:
        table = power_table(inner, n)
    zero = outer.field.zero()
    out, scales = [], []
    for k in range(1, n + 1):
        acc, low = zero, INF
        for l in range(1, k + 1):
            o = outer.coeffs[l - 1]
            t = table[l][k]
            if o.is_exact_zero or t.is_exact_zero:
                continue
            term = o * t
            if not term.is_zero():
                low = min(low, term.valuation())
            acc = acc + term
        out.append(acc)
        scales.append(low)
    return TruncatedSeries(outer.field, out), scales


def compare(lhs: TruncatedSeries, rhs: TruncatedSeries, scales=None) -> IdentityCheck:
    diff = ps_add(lhs, -rhs)
    digits = []
    for k, d in enumerate(diff.coeffs, 1):
        if not d.is_zero():
            digits.append(None)
            continue
        if d.is_exact_zero:
            digits.append(INF)
            continue
        s = INF
        for side in (lhs[k], rhs[k]):
            if not side.is_zero():
                s = min(s, side.valuation())
        if scales is not None:
            s = min(s, scales[k - 1])
        digits.append(INF if s == INF else d.absolute_precision - s)
    return IdentityCheck(diff, tuple(digits))


# -- solver ------------------------------------------------------------------------


@dataclass
class ConjugacyReport:
    map: MapSpec
    order: int
    f: TruncatedSeries
    g: TruncatedSeries
    radii: dict[str, LogRadius | None]
    bound_check: list[BoundVerdict]
    regime: Regime
    extra: dict = dc_field(default_factory=dict)

    @property
    def b(self) -> tuple[Scalar, ...]:
        return self.g.coeffs

    @property
    def all_pass(self) -> bool:
        return all(v.verdict is Verdict.PASS for v in self.bound_check)

    @property
    def delta_g_consistent(self) -> bool:
        emp, low = self.radii["delta_g_empirical"], self.radii["delta_g_lower"]
        return emp.exponent >= low.exponent

    @property
    def semi_domain(self) -> LogRadius | None:
        """Disc where ``g(f(x)) = lam*g(x)`` is proved."""
        return self.radii["rho"] if self.regime is Regime.ATTRACTING else self.radii["delta_f"]

    @property
    def full_domain(self) -> LogRadius | None:
        """Disc where ``g(f(g^{-1}(x))) = lam*x`` is proved."""
        if self.regime is Regime.ATTRACTING:
            return self.radii["rho"].shifted(-self.map.vlam)
        return self.radii["delta_f"]

    @cached_property
    def _g_inverse_and_powers(self):
        return comp_inverse_with_powers(self.g)

    @cached_property
    def g_inverse(self) -> TruncatedSeries:
        inv = self._g_inverse_and_powers[0]
        model = None
        if self.g.tail_model is not None:
            # |b_k| r^(k-1) <= 1 for r = delta_g lower bound passes to the inverse
            model = CoeffBoundModel(c1=self.radii["delta_g_lower"].exponent)
        return TruncatedSeries(inv.field, inv.coeffs, tail_model=model, polynomial=inv.polynomial)

    @cached_property
    def _g_after_f(self):
        return _compose_scaled(self.g, self.f, self.extra.get("f_powers"))

    def semiconjugacy_check(self) -> IdentityCheck:
        """``g o f`` against ``lam * g`` through the order."""
        lhs, scales = self._g_after_f
        return compare(lhs, scale(self.g, self.map.lam), scales)

    def default_grouping(self) -> str:
        """Pick the grouping of ``g o f o g^{-1}`` that keeps more tracked digits.

        ``"left"`` is ``(g o f) o g^{-1}`` and ``"right"`` is ``g o (f o g^{-1})``.
        At degree k the left form cancels about ``(k-1)*max(0, -v(lam))`` digits
        (the summand ``b_k lam^k`` against the result ``lam b_k``) and the right
        form about ``(k-1)*max(0, v(lam))`` (``f o g^{-1} = g^{-1}(lam x)``).
        The left form reuses the inverse's power table, so it is preferred
        unless it is predicted to keep fewer than ``GROUPING_MIN_DIGITS``.
        """
        loss = (self.order - 1) * max(0, -self.map.vlam)
        return "left" if self.f.field.precision - loss >= GROUPING_MIN_DIGITS else "right"

    def conjugacy_check(self, grouping: str | None = None) -> IdentityCheck:
        """``g o f o g^{-1}`` against ``lam * x`` through the order."""
        grouping = grouping or self.default_grouping()
        _, inv_powers = self._g_inverse_and_powers
        if grouping == "left":
            lhs, scales = _compose_scaled(self._g_after_f[0], self.g_inverse, inv_powers)
        elif grouping == "right":
            inner, _ = _compose_scaled(self.f, self.g_inverse, inv_powers)
            lhs, scales = _compose_scaled(self.g, inner)
        else:
            raise ValueError(f"unknown grouping {grouping!r}")
        lam_x = scale(TruncatedSeries.identity(self.f.field, self.order), self.map.lam)
        return compare(lhs, lam_x, scales)


def solve_coefficients(m: MapSpec, order: int):
    """Triangular solve for b_1..b_N using the power table of f.

    Returns ``(f, b, table)`` with ``table[l][k] = [x^k] f^l``.
    """
    f = m.realize(order)
    table = power_table(f, order)
    lam = m.lam
    one = m.field.one()
    b = [None, one]
    lam_k = lam
    for k in range(2, order + 1):
        lam_k = lam_k * lam
        acc = m.field.zero()
        for l in range(1, k):
            t = table[l][k]
            if not t.is_exact_zero and not b[l].is_exact_zero:
                acc = acc + b[l] * t
        denom = lam - lam_k
        if denom.is_exact_zero:
            raise DivisionByZero(f"lambda - lambda^{k} vanished")
        b.append(acc / denom)
    return f, b[1:], table


def schroder_solve(m: MapSpec, order: int = 64) -> ConjugacyReport:
    if order < 2:
        raise ValueError("order must be at least 2")
    if m.vlam == 0:
        raise IndifferentMultiplier("|lambda| = 1")
    f, b, f_powers = solve_coefficients(m, order)
    radii = all_radii(m)
    rho, gamma = radii["rho"], radii["gamma"]
    vlam = m.vlam
    regime = m.regime
    if regime is Regime.ATTRACTING:
        rg_lower = rho
        dg_lower = rho.shifted(-vlam)
        source, model_args = rho, {"c1": rho.exponent, "c2": vlam}
    else:
        rg_lower = dg_lower = gamma.shifted(-vlam)
        source, model_args = gamma, {"c1": gamma.exponent - vlam}

    model, polynomial = None, False
    if source.status is not Status.TRUNCATION:
        if source.exponent == INF:
            polynomial = all(c.is_exact_zero for c in b[1:])
        else:
            model = CoeffBoundModel(**model_args)
    g = TruncatedSeries(m.field, b, tail_model=model, polynomial=polynomial)

    if regime is Regime.ATTRACTING:
        verdicts = check_bound_attracting(b, rho.exponent, vlam)
    else:
        verdicts = check_bound_repelling(b, gamma.exponent, vlam)

    report = ConjugacyReport(
        map=m,
        order=order,
        f=f,
        g=g,
        radii={
            "rho": rho,
            "Rf": radii["Rf"],
            "delta_f": radii["delta"],
            "gamma": gamma,
            "Rg_lower": rg_lower,
            "delta_g_lower": dg_lower,
        },
        bound_check=verdicts,
        regime=regime,
        extra={"f_powers": f_powers},
    )
    report.radii["delta_g_empirical"] = delta_g_empirical(report)
    return report


def delta_g_empirical(report: ConjugacyReport) -> LogRadius:
    """``min_{2<=k<=N} v(b_k)/(k-1)`` from the computed coefficients.

    Only an upper estimate of the true exponent unless g is known exactly.
    """
    best = INF
    for k, bk in enumerate(report.b[1:], 2):
        if not bk.is_zero():
            best = min(best, Fraction(bk.valuation(), k - 1))
    status = Status.ATTAINED if report.g.polynomial else Status.TRUNCATION
    return LogRadius(best, status)


# -- injectivity lemma -----------------------------------------------------------


@dataclass(frozen=True)
class InjectivityReport:
    radius_exponent: Fraction
    injective_on_open_disc: bool
    d: int | None
    basis: str
    order: int
    equality_set: tuple[int, ...] = ()


def _model_tail_decision(order, a0, a1, c2):
    """Decide ``phi(k) = a0 + a1(k-1) - c2 log2 k >= 0`` for every k > order.

    Returns (holds, equality_possible) or None when the model cannot decide.
    """
    a0, a1, c2 = Fraction(a0), Fraction(a1), Fraction(c2)
    if a1 < 0 or (a1 == 0 and c2 > 0):
        return None
    if a1 == 0:
        if a0 < 0:
            return None
        return True, a0 == 0
    equality = False
    for k in exactlog.tail_scan(order + 1, a1, c2):
        if not exactlog.phi_nonnegative(a0, a1, c2, k):
            return None
        equality = equality or exactlog.phi_zero(a0, a1, c2, k)
    return True, equality


def lemma1_check(h: TruncatedSeries, e_r) -> InjectivityReport:
    """Check ``|c_k| r^k <= |c_1| r`` for all k, with ``r = q**e_r``.

    In valuations: ``v(c_k) - k*e_r >= v(c_1) - e_r``. When it holds, h maps
    the open disc of radius r one-to-one onto the disc of radius ``|c_1| r``,
    and ``d = max{k : equality}`` counts the covering degree on the closed disc.
    ``d`` is None when a tail model leaves equality possible beyond N.
    """
    e_r = Fraction(e_r)
    c1 = h[1]
    if c1.is_zero():
        raise NonUnitLinearCoefficient("the injectivity lemma needs c_1 != 0")
    rhs = c1.valuation() - e_r
    equalities = [1]
    for k in range(2, h.order + 1):
        ck = h[k]
        if ck.is_exact_zero:
            continue
        lhs = ck.valuation() - k * e_r
        if ck.is_zero_to_precision:
            if lhs < rhs:
                raise InsufficientTailInformation(f"c_{k} is not known precisely enough")
            continue
        if lhs < rhs:
            return InjectivityReport(e_r, False, None, "coefficients", h.order, tuple(equalities))
        if lhs == rhs:
            equalities.append(k)
    if h.polynomial:
        return InjectivityReport(e_r, True, max(equalities), "coefficients", h.order, tuple(equalities))
    m = h.tail_model
    if m is None:
        raise InsufficientTailInformation("hypothesis holds through order N but the tail is unknown")
    # v(c_k) - k e_r >= c0 + c1(k-1) - c2 log2 k - k e_r ; compare with v(c_1) - e_r
    decision = _model_tail_decision(h.order, m.c0 - c1.valuation(), m.c1 - e_r, m.c2)
    if decision is None:
        raise InsufficientTailInformation("tail model does not imply the hypothesis beyond N")
    _, equality_possible = decision
    d = None if equality_possible else max(equalities)
    return InjectivityReport(e_r, True, d, "model", h.order, tuple(equalities))
